//! Variable frames with by-name links between them.
//!
//! A callee that receives a variable name links a local name to the
//! caller's binding; reads and writes through the local name land in the
//! caller's frame.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::value::Value;

#[derive(Debug, Clone)]
enum Binding {
    Value(Value),
    Link { frame: usize, name: String },
}

#[derive(Debug, Clone)]
pub struct Environment {
    frames: Vec<HashMap<String, Binding>>,
}

impl Default for Environment {
    fn default() -> Self {
        Self::new()
    }
}

impl Environment {
    /// An environment holding only the global frame.
    pub fn new() -> Self {
        Environment {
            frames: vec![HashMap::new()],
        }
    }

    /// Number of frames, the global frame included.
    pub fn depth(&self) -> usize {
        self.frames.len()
    }

    pub fn current_frame(&self) -> usize {
        self.frames.len() - 1
    }

    pub fn push_frame(&mut self) {
        self.frames.push(HashMap::new());
    }

    pub fn pop_frame(&mut self) {
        if self.frames.len() > 1 {
            self.frames.pop();
        }
    }

    /// Follow links from the current frame to the frame that owns `name`.
    fn resolve(&self, name: &str) -> (usize, String) {
        let mut frame = self.current_frame();
        let mut name = name.to_string();
        loop {
            match self.frames[frame].get(&name) {
                Some(Binding::Link {
                    frame: f,
                    name: target,
                }) => {
                    frame = *f;
                    name = target.clone();
                }
                _ => return (frame, name),
            }
        }
    }

    fn resolve_ref(&self, name: &str) -> Option<&Value> {
        // fast path for plain local bindings
        match self.frames[self.current_frame()].get(name)? {
            Binding::Value(v) => Some(v),
            Binding::Link { .. } => {
                let (f, n) = self.resolve(name);
                match self.frames[f].get(&n)? {
                    Binding::Value(v) => Some(v),
                    Binding::Link { .. } => None,
                }
            }
        }
    }

    pub fn is_bound(&self, name: &str) -> bool {
        self.resolve_ref(name).is_some()
    }

    pub fn get(&self, name: &str) -> Result<Value> {
        self.get_ref(name).cloned()
    }

    pub fn get_ref(&self, name: &str) -> Result<&Value> {
        self.resolve_ref(name)
            .ok_or_else(|| Error::UnboundVariable(name.to_string()))
    }

    pub fn get_mut(&mut self, name: &str) -> Result<&mut Value> {
        let top = self.current_frame();
        let is_local = matches!(self.frames[top].get(name), Some(Binding::Value(_)));
        let (f, n) = if is_local {
            (top, name.to_string())
        } else {
            self.resolve(name)
        };
        match self.frames[f].get_mut(&n) {
            Some(Binding::Value(v)) => Ok(v),
            _ => Err(Error::UnboundVariable(name.to_string())),
        }
    }

    /// Bind `name`, writing through a link if the local name is one.
    pub fn set(&mut self, name: &str, v: Value) {
        let top = self.current_frame();
        if let Some(Binding::Value(slot)) = self.frames[top].get_mut(name) {
            *slot = v;
            return;
        }
        let (f, n) = self.resolve(name);
        self.frames[f].insert(n, Binding::Value(v));
    }

    /// Remove a binding (through links), returning its value.
    pub fn unset(&mut self, name: &str) -> Option<Value> {
        let (f, n) = self.resolve(name);
        match self.frames[f].remove(&n) {
            Some(Binding::Value(v)) => Some(v),
            Some(link) => {
                self.frames[f].insert(n, link);
                None
            }
            None => None,
        }
    }

    /// Make `local` in the current frame an alias for `target` in `frame`.
    pub fn link(&mut self, local: &str, frame: usize, target: &str) {
        let top = self.current_frame();
        debug_assert!(frame < top, "links point at enclosing frames");
        self.frames[top].insert(
            local.to_string(),
            Binding::Link {
                frame,
                name: target.to_string(),
            },
        );
    }

    /// Alias `local` to `target` in the frame `level` steps up from here.
    pub fn upvar(&mut self, level: usize, target: &str, local: &str) -> Result<()> {
        let top = self.current_frame();
        if level == 0 || level > top {
            return Err(Error::host(format!("bad level {level}")));
        }
        self.link(local, top - level, target);
        Ok(())
    }

    /// Run `f` in a fresh frame, popping it afterwards whatever `f` returns.
    pub fn with_frame<R>(&mut self, f: impl FnOnce(&mut Environment) -> R) -> R {
        self.push_frame();
        let r = f(self);
        self.pop_frame();
        r
    }
}
