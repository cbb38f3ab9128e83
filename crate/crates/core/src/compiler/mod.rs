//! Turning class declarations into list layouts and generated commands.

mod commands;
mod expand;
mod validate;

use std::cell::RefCell;
use std::rc::Rc;

use indexmap::IndexMap;

use crate::dsl::{ClassDecl, MethodDecl, TypeTag, Visibility};
use crate::error::{Error, Result};
use crate::runtime::{Environment, Registry};
use crate::value::Value;

pub use expand::expand;
pub use validate::validate_decl;

pub(crate) use commands::{check_arity, generate, with_detached};

#[derive(Debug, Clone, PartialEq)]
pub struct FieldSlot {
    pub name: String,
    pub type_tag: TypeTag,
    pub visibility: Visibility,
    pub index: usize,
    /// Class whose declaration introduced the field.
    pub declared_in: String,
}

#[derive(Debug, Clone)]
pub struct StaticSlot {
    pub type_tag: TypeTag,
    pub visibility: Visibility,
    pub value: Value,
}

/// A method as reachable from one class.
#[derive(Debug, Clone)]
pub struct MethodBinding {
    pub decl: MethodDecl,
    /// Class whose body runs; differs from the holder for imported methods.
    pub owner: String,
    /// Command suffix, `my.`-prefixed for private methods.
    pub key: String,
    pub dispatcher: bool,
    pub imported: bool,
}

impl MethodBinding {
    pub fn base_key(&self) -> String {
        match self.decl.visibility {
            Visibility::Public => format!("base.{}", self.decl.name),
            Visibility::Private => format!("my.base.{}", self.decl.name),
        }
    }
}

pub(crate) fn exposed(name: &str, vis: Visibility) -> String {
    match vis {
        Visibility::Public => name.to_string(),
        Visibility::Private => format!("my.{name}"),
    }
}

#[derive(Debug)]
pub struct CompiledClass {
    name: String,
    decl: ClassDecl,
    parent: Option<Rc<CompiledClass>>,
    is_virtual: bool,
    fields: Vec<FieldSlot>,
    index_of: IndexMap<String, usize>,
    defaults: Value,
    statics: RefCell<IndexMap<String, StaticSlot>>,
    methods: IndexMap<String, MethodBinding>,
    constructor: Option<MethodDecl>,
    tag: Option<Value>,
}

impl CompiledClass {
    /// Lay out `d` against the classes already in `registry`. Nothing is
    /// registered.
    pub fn build(d: &ClassDecl, registry: &Registry) -> Result<CompiledClass> {
        validate_decl(d, registry)?;
        let parent = d.parent.as_ref().and_then(|p| registry.class(p)).cloned();
        let is_virtual = d.is_virtual || parent.as_ref().is_some_and(|p| p.is_virtual);
        let offset = usize::from(is_virtual);
        let tag = is_virtual.then(|| registry.intern(&format!("::{}", d.name)));

        let mut fields = Vec::new();
        let mut slots = Vec::new();
        if let Some(t) = &tag {
            slots.push(t.clone());
        }
        if let Some(p) = &parent {
            for f in &p.fields {
                fields.push(f.clone());
                slots.push(p.defaults.list_get(f.index)?);
            }
        }
        for f in d.instance_fields() {
            fields.push(FieldSlot {
                name: f.name.clone(),
                type_tag: f.type_tag,
                visibility: f.visibility,
                index: fields.len() + offset,
                declared_in: d.name.clone(),
            });
            slots.push(f.default_value.clone());
        }
        let index_of = fields.iter().map(|f| (f.name.clone(), f.index)).collect();

        let statics = d
            .static_fields()
            .map(|f| {
                (
                    f.name.clone(),
                    StaticSlot {
                        type_tag: f.type_tag,
                        visibility: f.visibility,
                        value: f.default_value.clone(),
                    },
                )
            })
            .collect();

        let mut methods = IndexMap::new();
        for m in &d.methods {
            let key = exposed(&m.name, m.visibility);
            let dispatcher = is_virtual && (m.modifiers.is_virtual || m.modifiers.is_override);
            methods.insert(
                key.clone(),
                MethodBinding {
                    decl: m.clone(),
                    owner: d.name.clone(),
                    key,
                    dispatcher,
                    imported: false,
                },
            );
        }
        if let Some(p) = &parent {
            for name in &d.imports {
                let mut b = p.methods[name.as_str()].clone();
                b.imported = true;
                methods.insert(name.clone(), b);
            }
        }

        let constructor = d.custom_constructor.as_ref().map(|c| MethodDecl {
            name: "constructor".into(),
            params: c.params.clone(),
            modifiers: crate::dsl::Modifiers {
                is_static: true,
                ..Default::default()
            },
            body_text: c.body_text.clone(),
            visibility: Visibility::Public,
            line: 0,
        });

        Ok(CompiledClass {
            name: d.name.clone(),
            decl: d.clone(),
            parent,
            is_virtual,
            fields,
            index_of,
            defaults: Value::list(slots),
            statics: RefCell::new(statics),
            methods,
            constructor,
            tag,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn decl(&self) -> &ClassDecl {
        &self.decl
    }

    pub fn parent(&self) -> Option<&Rc<CompiledClass>> {
        self.parent.as_ref()
    }

    pub fn is_virtual(&self) -> bool {
        self.is_virtual
    }

    /// Instance fields in slot order, inherited ones first.
    pub fn fields(&self) -> &[FieldSlot] {
        &self.fields
    }

    pub fn field_order(&self) -> Vec<&str> {
        self.fields.iter().map(|f| f.name.as_str()).collect()
    }

    /// Slot index of a public field.
    pub fn index_of(&self, field: &str) -> Option<usize> {
        self.field(field)
            .filter(|f| f.visibility == Visibility::Public)
            .map(|f| f.index)
    }

    /// Slot index of any field, private ones included.
    pub fn slot_of(&self, field: &str) -> Option<usize> {
        self.index_of.get(field).copied()
    }

    pub fn field(&self, name: &str) -> Option<&FieldSlot> {
        self.index_of.get(name).map(|&i| &self.fields[i - usize::from(self.is_virtual)])
    }

    /// Object length: field count plus the tag slot of virtual classes.
    pub fn object_len(&self) -> usize {
        self.fields.len() + usize::from(self.is_virtual)
    }

    pub fn defaults(&self) -> &Value {
        &self.defaults
    }

    /// The interned class tag stored in slot 0 of virtual objects.
    pub fn tag(&self) -> Option<&Value> {
        self.tag.as_ref()
    }

    pub fn methods(&self) -> &IndexMap<String, MethodBinding> {
        &self.methods
    }

    pub fn method(&self, key: &str) -> Option<&MethodBinding> {
        self.methods.get(key)
    }

    pub fn constructor(&self) -> Option<&MethodDecl> {
        self.constructor.as_ref()
    }

    /// Whether this class's own declaration carries a body for `key`.
    pub fn defines(&self, key: &str) -> bool {
        self.methods.get(key).is_some_and(|b| !b.imported)
    }

    /// Names of methods that dispatch on the class tag.
    pub fn virtual_methods(&self) -> impl Iterator<Item = &str> {
        self.methods
            .values()
            .filter(|b| b.dispatcher)
            .map(|b| b.key.as_str())
    }

    pub fn static_names(&self) -> Vec<String> {
        self.statics.borrow().keys().cloned().collect()
    }

    pub fn static_visibility(&self, name: &str) -> Option<Visibility> {
        self.statics.borrow().get(name).map(|s| s.visibility)
    }

    // ---- construction ----------------------------------------------------

    pub fn construct_positional(&self, vals: &[Value]) -> Result<Value> {
        if vals.len() != self.fields.len() {
            return Err(Error::Arity {
                command: format!("{}::new", self.name),
                expected: self.fields.len().to_string(),
                actual: vals.len(),
            });
        }
        let mut items = Vec::with_capacity(self.object_len());
        if let Some(t) = &self.tag {
            items.push(t.clone());
        }
        items.extend(vals.iter().cloned());
        Ok(Value::list(items))
    }

    /// The stored default object, shared rather than copied.
    pub fn construct_default(&self) -> Value {
        self.defaults.clone()
    }

    pub fn construct_named(&self, args: &[Value]) -> Result<Value> {
        if !args.len().is_multiple_of(2) {
            return Err(Error::Constructor(
                "Constructor argument must be a list of '-<field> <value>' pairs".into(),
            ));
        }
        let mut obj = self.defaults.clone();
        for pair in args.chunks(2) {
            let key = pair[0].to_text()?;
            let Some(field) = key.strip_prefix('-') else {
                return Err(Error::Constructor(format!(
                    "Constructor argument keys must start with '-', got '{key}'"
                )));
            };
            // the public setter is tried first, then the private one; both
            // land on the same slot
            let idx = self
                .slot_of(field)
                .ok_or_else(|| Error::Constructor(format!("Unknown field option: {field}")))?;
            obj.list_set(idx, pair[1].clone())?;
        }
        Ok(obj)
    }

    // ---- field access ------------------------------------------------------

    fn unknown_field(&self, field: &str) -> Error {
        Error::UnknownField {
            class: self.name.clone(),
            field: field.to_string(),
        }
    }

    fn public_slot(&self, field: &str, accessor: &'static str) -> Result<usize> {
        match self.field(field) {
            Some(f) if f.visibility == Visibility::Public => Ok(f.index),
            Some(_) => Err(Error::PrivateField {
                class: self.name.clone(),
                field: field.to_string(),
                accessor,
            }),
            None => Err(self.unknown_field(field)),
        }
    }

    fn private_slot(&self, field: &str) -> Result<usize> {
        match self.field(field) {
            Some(f) if f.visibility == Visibility::Private => Ok(f.index),
            _ => Err(self.unknown_field(field)),
        }
    }

    pub fn get_field(&self, field: &str, obj: &Value) -> Result<Value> {
        obj.list_get(self.public_slot(field, "get")?)
    }

    pub fn set_field(&self, field: &str, var: &str, env: &mut Environment, v: Value) -> Result<()> {
        let idx = self.public_slot(field, "set")?;
        env.get_mut(var)?.list_set(idx, v)
    }

    /// Detach `field` of the object in `var` into `temp_var`, run `body`,
    /// then write the temporary back, also when `body` fails.
    pub fn update_field(
        &self,
        field: &str,
        var: &str,
        temp_var: &str,
        env: &mut Environment,
        body: impl FnOnce(&mut Environment) -> Result<()>,
    ) -> Result<()> {
        let idx = self.public_slot(field, "update")?;
        with_detached(env, var, &[(idx, temp_var)], true, body)
    }

    pub fn my_get_field(&self, field: &str, obj: &Value) -> Result<Value> {
        obj.list_get(self.private_slot(field)?)
    }

    pub fn my_set_field(
        &self,
        field: &str,
        var: &str,
        env: &mut Environment,
        v: Value,
    ) -> Result<()> {
        let idx = self.private_slot(field)?;
        env.get_mut(var)?.list_set(idx, v)
    }

    pub fn my_update_field(
        &self,
        field: &str,
        var: &str,
        temp_var: &str,
        env: &mut Environment,
        body: impl FnOnce(&mut Environment) -> Result<()>,
    ) -> Result<()> {
        let idx = self.private_slot(field)?;
        with_detached(env, var, &[(idx, temp_var)], true, body)
    }

    // ---- statics -----------------------------------------------------------

    pub fn static_get(&self, name: &str) -> Result<Value> {
        self.statics
            .borrow()
            .get(name)
            .map(|s| s.value.clone())
            .ok_or_else(|| Error::UnknownStatic {
                class: self.name.clone(),
                name: name.to_string(),
            })
    }

    pub fn static_set(&self, name: &str, v: Value) -> Result<()> {
        match self.statics.borrow_mut().get_mut(name) {
            Some(s) => {
                s.value = v;
                Ok(())
            }
            None => Err(Error::UnknownStatic {
                class: self.name.clone(),
                name: name.to_string(),
            }),
        }
    }
}
