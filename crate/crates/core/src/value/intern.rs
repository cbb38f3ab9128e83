//! Atom table: equal texts map to one shared cell.

use std::collections::HashMap;

use super::Value;

#[derive(Default)]
pub struct Interner {
    atoms: HashMap<Box<str>, Value>,
}

impl Interner {
    pub fn new() -> Self {
        Self::default()
    }

    /// The unique atom for `s`. Repeated calls return the identical cell and
    /// allocate nothing after the first.
    pub fn intern(&mut self, s: &str) -> Value {
        if let Some(atom) = self.atoms.get(s) {
            return atom.clone();
        }
        let atom = Value::new_atom(s);
        self.atoms.insert(s.into(), atom.clone());
        atom
    }

    pub fn get(&self, s: &str) -> Option<&Value> {
        self.atoms.get(s)
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }
}

impl std::fmt::Debug for Interner {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Interner").field("atoms", &self.atoms.len()).finish()
    }
}
