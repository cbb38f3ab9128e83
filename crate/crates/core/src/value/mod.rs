//! Shareable copy-on-write values.
//!
//! A [`Value`] is a handle to a reference-counted cell. Cloning a value
//! shares the cell; mutating through a handle whose cell is shared first
//! copies the cell (one level deep: children stay shared). Every cell carries
//! a lazily materialized canonical text form, invalidated on mutation.

pub mod intern;
pub mod ledger;
pub mod text;

use std::any::Any;
use std::borrow::Cow;
use std::cell::OnceCell;
use std::collections::HashSet;
use std::fmt;
use std::rc::Rc;

use indexmap::IndexMap;

use crate::error::{Error, Result};
use crate::native::NativeTypeDescriptor;

pub use intern::Interner;
pub use ledger::{AllocationLedger, LedgerDelta, LedgerScope};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Kind {
    Int,
    Double,
    Bool,
    Text,
    List,
    Dict,
    Atom,
    Native,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::Int => "int",
            Kind::Double => "double",
            Kind::Bool => "bool",
            Kind::Text => "text",
            Kind::List => "list",
            Kind::Dict => "dict",
            Kind::Atom => "atom",
            Kind::Native => "native",
        }
    }
}

/// An instance of a registered native type.
pub struct NativeInstance {
    pub(crate) descriptor: Rc<NativeTypeDescriptor>,
    pub(crate) data: Box<dyn Any>,
}

impl NativeInstance {
    pub fn type_name(&self) -> &str {
        &self.descriptor.type_name
    }

    pub fn descriptor(&self) -> &Rc<NativeTypeDescriptor> {
        &self.descriptor
    }

    pub fn data(&self) -> &dyn Any {
        &*self.data
    }

    pub fn downcast_ref<T: 'static>(&self) -> Option<&T> {
        self.data.downcast_ref()
    }

    pub fn downcast_mut<T: 'static>(&mut self) -> Option<&mut T> {
        self.data.downcast_mut()
    }
}

impl Clone for NativeInstance {
    fn clone(&self) -> Self {
        let dup = self
            .descriptor
            .duplicate
            .as_ref()
            .expect("registered native types always carry a duplicate hook");
        NativeInstance {
            descriptor: Rc::clone(&self.descriptor),
            data: dup(&*self.data),
        }
    }
}

#[derive(Clone)]
pub(crate) enum Rep {
    Int(i64),
    Double(f64),
    Bool(bool),
    Text(Box<str>),
    List(Vec<Value>),
    Dict(IndexMap<Box<str>, Value>),
    Atom(Box<str>),
    Native(NativeInstance),
}

impl Rep {
    fn kind(&self) -> Kind {
        match self {
            Rep::Int(_) => Kind::Int,
            Rep::Double(_) => Kind::Double,
            Rep::Bool(_) => Kind::Bool,
            Rep::Text(_) => Kind::Text,
            Rep::List(_) => Kind::List,
            Rep::Dict(_) => Kind::Dict,
            Rep::Atom(_) => Kind::Atom,
            Rep::Native(_) => Kind::Native,
        }
    }

    /// Bytes charged for this cell under the accounting model.
    fn charge(&self) -> usize {
        use ledger::*;
        CELL_HEADER
            + match self {
                Rep::Int(_) | Rep::Double(_) | Rep::Bool(_) => 0,
                Rep::Text(s) | Rep::Atom(s) => s.len(),
                Rep::List(v) => LIST_HEADER + v.len() * SLOT,
                Rep::Dict(d) => {
                    DICT_HEADER + d.keys().map(|k| DICT_ENTRY + k.len()).sum::<usize>()
                }
                Rep::Native(n) => n.descriptor.footprint_of(&*n.data),
            }
    }
}

pub(crate) struct Obj {
    rep: Rep,
    text: OnceCell<Box<str>>,
    charged: usize,
    tracked: bool,
}

impl Obj {
    fn new(rep: Rep) -> Obj {
        let charged = rep.charge();
        ledger::record_alloc(charged);
        Obj {
            rep,
            text: OnceCell::new(),
            charged,
            tracked: true,
        }
    }
}

impl Clone for Obj {
    // Only reached through `Rc::make_mut`, i.e. a copy-on-write duplication.
    fn clone(&self) -> Self {
        Obj::new(self.rep.clone())
    }
}

impl Drop for Obj {
    fn drop(&mut self) {
        if self.tracked {
            ledger::record_free(self.charged);
        }
    }
}

thread_local! {
    static EMPTY: Value = Value(Rc::new(Obj {
        rep: Rep::Text("".into()),
        text: OnceCell::new(),
        charged: 0,
        tracked: false,
    }));
}

#[derive(Clone)]
pub struct Value(Rc<Obj>);

impl Value {
    fn from_rep(rep: Rep) -> Value {
        Value(Rc::new(Obj::new(rep)))
    }

    pub fn int(i: i64) -> Value {
        Value::from_rep(Rep::Int(i))
    }

    pub fn double(d: f64) -> Value {
        Value::from_rep(Rep::Double(d))
    }

    pub fn boolean(b: bool) -> Value {
        Value::from_rep(Rep::Bool(b))
    }

    pub fn text(s: impl Into<String>) -> Value {
        Value::from_rep(Rep::Text(s.into().into_boxed_str()))
    }

    pub fn list(items: Vec<Value>) -> Value {
        Value::from_rep(Rep::List(items))
    }

    pub fn dict<K: Into<String>>(entries: impl IntoIterator<Item = (K, Value)>) -> Value {
        let map = entries
            .into_iter()
            .map(|(k, v)| (k.into().into_boxed_str(), v))
            .collect();
        Value::from_rep(Rep::Dict(map))
    }

    /// The shared empty text value. Used as the detached-slot sentinel; it
    /// lives for the whole thread and is not charged to the ledger.
    pub fn empty() -> Value {
        EMPTY.with(Value::clone)
    }

    /// Atoms are created only by an [`Interner`].
    pub(crate) fn new_atom(s: &str) -> Value {
        Value::from_rep(Rep::Atom(s.into()))
    }

    pub(crate) fn new_native(instance: NativeInstance) -> Value {
        Value::from_rep(Rep::Native(instance))
    }

    /// Split a canonical list text into a list of text elements.
    pub fn parse_list(s: &str) -> Result<Value> {
        let items = text::split_list(s)?;
        Ok(Value::list(items.into_iter().map(Value::text).collect()))
    }

    pub fn kind(&self) -> Kind {
        self.0.rep.kind()
    }

    pub fn share_count(&self) -> usize {
        Rc::strong_count(&self.0)
    }

    pub fn is_shared(&self) -> bool {
        self.share_count() > 1
    }

    /// Identity comparison: both handles point at the same cell.
    pub fn ptr_eq(&self, other: &Value) -> bool {
        Rc::ptr_eq(&self.0, &other.0)
    }

    /// Address of the underlying cell, stable while any handle is alive.
    pub fn cell_id(&self) -> usize {
        Rc::as_ptr(&self.0) as *const () as usize
    }

    /// Mutable access to the representation, duplicating the cell first if it
    /// is shared. Invalidates the cached text and re-charges the ledger.
    fn mutate<R>(&mut self, f: impl FnOnce(&mut Rep) -> R) -> R {
        let obj = Rc::make_mut(&mut self.0);
        obj.text = OnceCell::new();
        let r = f(&mut obj.rep);
        let new = obj.rep.charge();
        if obj.tracked {
            ledger::record_resize(obj.charged, new);
        }
        obj.charged = new;
        r
    }

    // ---- text ------------------------------------------------------------

    /// Canonical text form, computed once and cached on the cell.
    pub fn to_text(&self) -> Result<&str> {
        match &self.0.rep {
            Rep::Text(s) | Rep::Atom(s) => return Ok(s),
            _ => {}
        }
        if let Some(t) = self.0.text.get() {
            return Ok(t);
        }
        let s = self.render()?;
        let _ = self.0.text.set(s.into_boxed_str());
        Ok(self.0.text.get().expect("just set"))
    }

    fn render(&self) -> Result<String> {
        Ok(match &self.0.rep {
            Rep::Int(i) => i.to_string(),
            Rep::Double(d) => text::format_double(*d),
            Rep::Bool(b) => text::format_bool(*b).to_string(),
            Rep::Text(s) | Rep::Atom(s) => s.to_string(),
            Rep::List(items) => {
                let mut out = String::new();
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        out.push(' ');
                    }
                    text::push_element(&mut out, item.to_text()?);
                }
                out
            }
            Rep::Dict(map) => {
                let mut out = String::new();
                for (i, (k, v)) in map.iter().enumerate() {
                    if i > 0 {
                        out.push(' ');
                    }
                    text::push_element(&mut out, k);
                    out.push(' ');
                    text::push_element(&mut out, v.to_text()?);
                }
                out
            }
            Rep::Native(n) => match &n.descriptor.to_text {
                Some(hook) => hook(&*n.data).map_err(|reason| Error::Conversion {
                    type_name: n.descriptor.type_name.clone(),
                    reason,
                })?,
                None => return Err(Error::CannotCastToText(n.descriptor.type_name.clone())),
            },
        })
    }

    /// Convenience for display paths: the text form, or a placeholder for
    /// natives that cannot be rendered.
    pub fn display_text(&self) -> String {
        match self.to_text() {
            Ok(s) => s.to_string(),
            Err(_) => format!("<{}>", self.kind().name()),
        }
    }

    /// Pre-seed the cached text (used when a value changes representation
    /// but must keep its text form).
    pub(crate) fn seed_text(&self, s: &str) {
        let _ = self.0.text.set(s.into());
    }

    // ---- scalars ---------------------------------------------------------

    pub fn as_f64(&self) -> Result<f64> {
        match &self.0.rep {
            Rep::Double(d) => Ok(*d),
            Rep::Int(i) => Ok(*i as f64),
            Rep::Bool(b) => Ok(*b as i64 as f64),
            Rep::Text(s) | Rep::Atom(s) => parse_f64(s).ok_or_else(|| type_err("double", s)),
            _ => Err(type_err("double", &self.display_text())),
        }
    }

    pub fn as_i64(&self) -> Result<i64> {
        match &self.0.rep {
            Rep::Int(i) => Ok(*i),
            Rep::Bool(b) => Ok(*b as i64),
            Rep::Text(s) | Rep::Atom(s) => s.trim().parse().map_err(|_| type_err("integer", s)),
            _ => Err(type_err("integer", &self.display_text())),
        }
    }

    pub fn as_bool(&self) -> Result<bool> {
        match &self.0.rep {
            Rep::Bool(b) => Ok(*b),
            Rep::Int(i) => Ok(*i != 0),
            Rep::Double(d) => Ok(*d != 0.0),
            Rep::Text(s) | Rep::Atom(s) => parse_bool(s).ok_or_else(|| type_err("boolean", s)),
            _ => Err(type_err("boolean", &self.display_text())),
        }
    }

    /// Borrowed text for text and atom cells.
    pub fn as_str(&self) -> Option<&str> {
        match &self.0.rep {
            Rep::Text(s) | Rep::Atom(s) => Some(s),
            _ => None,
        }
    }

    pub fn is_atom(&self) -> bool {
        matches!(self.0.rep, Rep::Atom(_))
    }

    // ---- lists -----------------------------------------------------------

    /// The elements of a list, parsing text on demand.
    pub fn as_list(&self) -> Result<Cow<'_, [Value]>> {
        match &self.0.rep {
            Rep::List(items) => Ok(Cow::Borrowed(items)),
            Rep::Text(s) => {
                let items = text::split_list(s)?;
                Ok(Cow::Owned(items.into_iter().map(Value::text).collect()))
            }
            _ => Err(Error::Type {
                expected: "list",
                found: self.kind().name().to_string(),
            }),
        }
    }

    pub fn list_len(&self) -> Result<usize> {
        match &self.0.rep {
            Rep::List(items) => Ok(items.len()),
            _ => Ok(self.as_list()?.len()),
        }
    }

    /// Element `i`. The returned handle shares the element's cell.
    pub fn list_get(&self, i: usize) -> Result<Value> {
        match &self.0.rep {
            Rep::List(items) => items.get(i).cloned().ok_or(Error::Range {
                index: i,
                len: items.len(),
            }),
            _ => {
                let items = self.as_list()?;
                let len = items.len();
                items.get(i).cloned().ok_or(Error::Range { index: i, len })
            }
        }
    }

    /// Borrowing variant of [`list_get`](Self::list_get) for list cells.
    pub fn list_ref(&self, i: usize) -> Result<&Value> {
        match &self.0.rep {
            Rep::List(items) => items.get(i).ok_or(Error::Range {
                index: i,
                len: items.len(),
            }),
            _ => Err(Error::Type {
                expected: "list",
                found: self.kind().name().to_string(),
            }),
        }
    }

    /// Convert a text value holding a list into a list cell in place.
    fn ensure_list(&mut self) -> Result<()> {
        match &self.0.rep {
            Rep::List(_) => Ok(()),
            Rep::Text(_) => {
                let parsed = Value::list(self.as_list()?.into_owned());
                *self = parsed;
                Ok(())
            }
            _ => Err(Error::Type {
                expected: "list",
                found: self.kind().name().to_string(),
            }),
        }
    }

    /// Replace element `i`. Copies the spine only if this handle's cell is
    /// shared; other holders never observe the write.
    pub fn list_set(&mut self, i: usize, v: Value) -> Result<()> {
        self.ensure_list()?;
        let len = self.list_len()?;
        if i >= len {
            return Err(Error::Range { index: i, len });
        }
        self.mutate(|rep| {
            if let Rep::List(items) = rep {
                items[i] = v;
            }
        });
        Ok(())
    }

    /// Swap element `i` with `v`, returning the old element.
    pub fn list_replace(&mut self, i: usize, v: Value) -> Result<Value> {
        self.ensure_list()?;
        let len = self.list_len()?;
        if i >= len {
            return Err(Error::Range { index: i, len });
        }
        Ok(self.mutate(|rep| match rep {
            Rep::List(items) => std::mem::replace(&mut items[i], v),
            _ => unreachable!(),
        }))
    }

    pub fn list_push(&mut self, v: Value) -> Result<()> {
        self.ensure_list()?;
        self.mutate(|rep| {
            if let Rep::List(items) = rep {
                items.push(v);
            }
        });
        Ok(())
    }

    // ---- dicts -----------------------------------------------------------

    fn ensure_dict(&mut self) -> Result<()> {
        match &self.0.rep {
            Rep::Dict(_) => Ok(()),
            Rep::Text(_) | Rep::List(_) => {
                let items = self.as_list()?;
                if items.len() % 2 != 0 {
                    return Err(Error::Type {
                        expected: "dict (even-length list)",
                        found: self.display_text(),
                    });
                }
                let mut map = IndexMap::new();
                for pair in items.chunks(2) {
                    map.insert(Box::from(pair[0].to_text()?), pair[1].clone());
                }
                *self = Value::from_rep(Rep::Dict(map));
                Ok(())
            }
            _ => Err(Error::Type {
                expected: "dict",
                found: self.kind().name().to_string(),
            }),
        }
    }

    pub fn dict_get(&self, key: &str) -> Result<Option<Value>> {
        match &self.0.rep {
            Rep::Dict(map) => Ok(map.get(key).cloned()),
            _ => {
                let mut tmp = self.clone();
                tmp.ensure_dict()?;
                tmp.dict_get(key)
            }
        }
    }

    pub fn dict_len(&self) -> Result<usize> {
        match &self.0.rep {
            Rep::Dict(map) => Ok(map.len()),
            _ => {
                let mut tmp = self.clone();
                tmp.ensure_dict()?;
                tmp.dict_len()
            }
        }
    }

    /// Insert or overwrite `key`. Copy-on-write on the dict spine.
    pub fn dict_set(&mut self, key: &str, v: Value) -> Result<()> {
        self.ensure_dict()?;
        self.mutate(|rep| {
            if let Rep::Dict(map) = rep {
                map.insert(key.into(), v);
            }
        });
        Ok(())
    }

    // ---- natives ---------------------------------------------------------

    pub fn as_native(&self) -> Option<&NativeInstance> {
        match &self.0.rep {
            Rep::Native(n) => Some(n),
            _ => None,
        }
    }

    /// Mutable access to a native instance; duplicates it via its descriptor
    /// when the cell is shared.
    pub fn native_mut<R>(&mut self, f: impl FnOnce(&mut NativeInstance) -> R) -> Option<R> {
        if !matches!(self.0.rep, Rep::Native(_)) {
            return None;
        }
        Some(self.mutate(|rep| match rep {
            Rep::Native(n) => f(n),
            _ => unreachable!(),
        }))
    }

    // ---- accounting ------------------------------------------------------

    /// Bytes charged to this cell alone.
    pub fn cell_bytes(&self) -> usize {
        self.0.rep.charge()
    }

    /// Bytes of this value and everything reachable from it, each distinct
    /// cell counted once.
    pub fn footprint_bytes(&self) -> usize {
        population_footprint(std::iter::once(self))
    }

    fn children(&self) -> Box<dyn Iterator<Item = &Value> + '_> {
        match &self.0.rep {
            Rep::List(items) => Box::new(items.iter()),
            Rep::Dict(map) => Box::new(map.values()),
            _ => Box::new(std::iter::empty()),
        }
    }

    /// Structural equality; scalars of different kinds compare by text.
    pub fn structurally_eq(&self, other: &Value) -> bool {
        if self.ptr_eq(other) {
            return true;
        }
        match (&self.0.rep, &other.0.rep) {
            (Rep::List(a), Rep::List(b)) => {
                a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.structurally_eq(y))
            }
            (Rep::Int(a), Rep::Int(b)) => a == b,
            (Rep::Double(a), Rep::Double(b)) => a.to_bits() == b.to_bits() || a == b,
            (Rep::Bool(a), Rep::Bool(b)) => a == b,
            (Rep::Dict(a), Rep::Dict(b)) => {
                a.len() == b.len()
                    && a.iter()
                        .zip(b)
                        .all(|((ka, va), (kb, vb))| ka == kb && va.structurally_eq(vb))
            }
            (Rep::List(_), Rep::Text(_)) | (Rep::Text(_), Rep::List(_)) => {
                match (self.as_list(), other.as_list()) {
                    (Ok(a), Ok(b)) => {
                        a.len() == b.len()
                            && a.iter().zip(b.iter()).all(|(x, y)| x.structurally_eq(y))
                    }
                    _ => false,
                }
            }
            _ => match (self.to_text(), other.to_text()) {
                (Ok(a), Ok(b)) => a == b,
                _ => false,
            },
        }
    }
}

/// Sum of [`Value::cell_bytes`] over every distinct cell reachable from
/// `values`. Shared cells are counted once for the whole population.
pub fn population_footprint<'a>(values: impl IntoIterator<Item = &'a Value>) -> usize {
    let mut seen = HashSet::new();
    let mut stack: Vec<&Value> = values.into_iter().collect();
    let mut total = 0;
    while let Some(v) = stack.pop() {
        if !seen.insert(v.cell_id()) {
            continue;
        }
        total += v.cell_bytes();
        stack.extend(v.children());
    }
    total
}

fn type_err(expected: &'static str, found: &str) -> Error {
    Error::Type {
        expected,
        found: found.to_string(),
    }
}

fn parse_f64(s: &str) -> Option<f64> {
    let t = s.trim();
    match t {
        "Inf" | "+Inf" => Some(f64::INFINITY),
        "-Inf" => Some(f64::NEG_INFINITY),
        _ => t.parse().ok(),
    }
}

pub(crate) fn parse_bool(s: &str) -> Option<bool> {
    match s.trim().to_ascii_lowercase().as_str() {
        "1" | "true" | "yes" | "on" => Some(true),
        "0" | "false" | "no" | "off" => Some(false),
        other => other.parse::<f64>().ok().map(|d| d != 0.0),
    }
}

impl PartialEq for Value {
    fn eq(&self, other: &Self) -> bool {
        self.structurally_eq(other)
    }
}

impl fmt::Debug for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({:?})", self.kind().name(), self.display_text())
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_text())
    }
}

impl From<i64> for Value {
    fn from(i: i64) -> Self {
        Value::int(i)
    }
}

impl From<f64> for Value {
    fn from(d: f64) -> Self {
        Value::double(d)
    }
}

impl From<bool> for Value {
    fn from(b: bool) -> Self {
        Value::boolean(b)
    }
}

impl From<&str> for Value {
    fn from(s: &str) -> Self {
        Value::text(s)
    }
}

impl From<String> for Value {
    fn from(s: String) -> Self {
        Value::text(s)
    }
}

impl From<Vec<Value>> for Value {
    fn from(items: Vec<Value>) -> Self {
        Value::list(items)
    }
}

impl serde::Serialize for Value {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let text = self.to_text().map_err(serde::ser::Error::custom)?;
        s.serialize_str(text)
    }
}
