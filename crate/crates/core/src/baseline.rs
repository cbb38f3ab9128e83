//! Reference-semantics comparator: objects live in a table keyed by handle
//! text and must be destroyed explicitly.
//!
//! Each object is charged to the allocation ledger as a handle text cell,
//! an object record and one variable entry per field, on top of whatever
//! the field values themselves cost.

use std::collections::HashMap;
use std::rc::Rc;

use crate::compiler::CompiledClass;
use crate::error::{Error, Result};
use crate::value::ledger;
use crate::value::Value;

/// Bytes charged per object record (command, namespace and variable table).
pub const OBJECT_RECORD: usize = 160;
/// Bytes charged per per-object variable.
pub const VAR_ENTRY: usize = 64;

/// Field layout shared by all objects of one class.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassSpec {
    pub name: String,
    pub fields: Vec<String>,
    pub defaults: Vec<Value>,
}

impl ClassSpec {
    pub fn new(name: impl Into<String>, fields: &[(&str, Value)]) -> Self {
        ClassSpec {
            name: name.into(),
            fields: fields.iter().map(|(n, _)| n.to_string()).collect(),
            defaults: fields.iter().map(|(_, v)| v.clone()).collect(),
        }
    }

    /// The instance layout of a compiled class, without its tag slot.
    pub fn from_class(c: &CompiledClass) -> Self {
        let defaults = c.defaults().as_list().map(|l| l.into_owned()).unwrap_or_default();
        let skip = usize::from(c.is_virtual());
        ClassSpec {
            name: c.name().to_string(),
            fields: c.field_order().iter().map(|s| s.to_string()).collect(),
            defaults: defaults.into_iter().skip(skip).collect(),
        }
    }

    fn record_bytes(&self) -> usize {
        OBJECT_RECORD + self.fields.len() * VAR_ENTRY
    }
}

#[derive(Debug)]
struct ObjectRecord {
    class: Rc<ClassSpec>,
    vars: Vec<Value>,
}

#[derive(Debug, Default)]
pub struct HandleTable {
    next_id: u64,
    live: HashMap<Box<str>, ObjectRecord>,
}

impl HandleTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn live_count(&self) -> usize {
        self.live.len()
    }

    /// Create an object and return its handle.
    pub fn handle_create(&mut self, class: &Rc<ClassSpec>, vals: &[Value]) -> Result<Value> {
        if vals.len() != class.fields.len() {
            return Err(Error::Arity {
                command: format!("{}::new", class.name),
                expected: class.fields.len().to_string(),
                actual: vals.len(),
            });
        }
        Ok(self.insert(class, vals.to_vec()))
    }

    /// Create an object holding the class defaults.
    pub fn handle_create_default(&mut self, class: &Rc<ClassSpec>) -> Value {
        self.insert(class, class.defaults.clone())
    }

    fn insert(&mut self, class: &Rc<ClassSpec>, vars: Vec<Value>) -> Value {
        self.next_id += 1;
        let handle = format!("::h::obj{}", self.next_id);
        ledger::record_alloc(class.record_bytes());
        self.live.insert(
            handle.as_str().into(),
            ObjectRecord {
                class: class.clone(),
                vars,
            },
        );
        Value::text(handle)
    }

    fn record(&self, h: &str) -> Result<&ObjectRecord> {
        self.live
            .get(h)
            .ok_or_else(|| Error::DanglingHandle(h.to_string()))
    }

    fn slot(rec: &ObjectRecord, field: &str) -> Result<usize> {
        rec.class
            .fields
            .iter()
            .position(|f| f == field)
            .ok_or_else(|| Error::UnknownField {
                class: rec.class.name.clone(),
                field: field.to_string(),
            })
    }

    pub fn handle_get(&self, h: &str, field: &str) -> Result<Value> {
        let rec = self.record(h)?;
        Ok(rec.vars[Self::slot(rec, field)?].clone())
    }

    pub fn handle_set(&mut self, h: &str, field: &str, v: Value) -> Result<()> {
        let rec = self
            .live
            .get_mut(h)
            .ok_or_else(|| Error::DanglingHandle(h.to_string()))?;
        let i = Self::slot(rec, field)?;
        rec.vars[i] = v;
        Ok(())
    }

    pub fn handle_destroy(&mut self, h: &str) -> Result<()> {
        let rec = self
            .live
            .remove(h)
            .ok_or_else(|| Error::DanglingHandle(h.to_string()))?;
        ledger::record_free(rec.class.record_bytes());
        Ok(())
    }

    /// Bytes charged to the live objects' records (handle texts and field
    /// values are accounted on their own cells).
    pub fn record_bytes(&self) -> usize {
        self.live.values().map(|r| r.class.record_bytes()).sum()
    }
}

impl Drop for HandleTable {
    fn drop(&mut self) {
        for rec in self.live.values() {
            ledger::record_free(rec.class.record_bytes());
        }
    }
}
