use std::collections::HashSet;

use crate::dsl::{ClassDecl, Visibility};
use crate::error::{Error, Result};
use crate::runtime::Registry;

use super::CompiledClass;

fn invalid(d: &ClassDecl, msg: impl Into<String>) -> Error {
    Error::Validation {
        class: d.name.clone(),
        msg: msg.into(),
    }
}

/// Cross-declaration checks that need the registry (parents, imports,
/// overrides). Purely local checks happen in the parser.
pub fn validate_decl(d: &ClassDecl, registry: &Registry) -> Result<()> {
    let parent = match &d.parent {
        Some(p) if *p == d.name => return Err(invalid(d, "a class cannot extend itself")),
        Some(p) => Some(
            registry
                .class(p)
                .ok_or_else(|| Error::UnknownClass(p.clone()))?
                .clone(),
        ),
        None => None,
    };
    let lineage_virtual = d.is_virtual || parent.as_ref().is_some_and(|p| p.is_virtual());

    if let Some(p) = &parent {
        if d.is_virtual && !p.is_virtual() {
            return Err(invalid(
                d,
                format!("virtual class cannot extend non-virtual class {}", p.name()),
            ));
        }
        for f in d.instance_fields() {
            if p.slot_of(&f.name).is_some() {
                return Err(invalid(
                    d,
                    format!("field \"{}\" already declared by {}", f.name, p.name()),
                ));
            }
        }
    }

    let own_fields: HashSet<&str> = d.instance_fields().map(|f| f.name.as_str()).collect();
    for m in &d.methods {
        if m.modifiers.is_virtual && !lineage_virtual {
            return Err(invalid(
                d,
                format!("virtual method \"{}\" requires a virtual class", m.name),
            ));
        }
        if m.modifiers.is_override && !ancestor_declares(parent.as_deref(), &m.name) {
            return Err(invalid(
                d,
                format!("method \"{}\" overrides nothing", m.name),
            ));
        }
        for f in m.modifiers.update.iter().flatten() {
            let known = own_fields.contains(f.as_str())
                || parent.as_ref().is_some_and(|p| p.slot_of(f).is_some());
            if !known {
                return Err(invalid(
                    d,
                    format!("method \"{}\" updates unknown field \"{f}\"", m.name),
                ));
            }
        }
    }

    if !d.imports.is_empty() {
        let p = parent
            .as_ref()
            .ok_or_else(|| invalid(d, "importMethods requires a parent class"))?;
        for name in &d.imports {
            if p.method(name).is_none() {
                let private = p.method(&format!("my.{name}")).is_some();
                return Err(if private {
                    invalid(d, format!("cannot import private method \"{name}\""))
                } else {
                    Error::UnknownMethod {
                        class: p.name().to_string(),
                        method: name.clone(),
                    }
                });
            }
            let clash = d
                .methods
                .iter()
                .any(|m| m.name == *name && m.visibility == Visibility::Public);
            if clash {
                return Err(invalid(
                    d,
                    format!("imported method \"{name}\" is also declared"),
                ));
            }
        }
    }
    Ok(())
}

fn ancestor_declares(mut class: Option<&CompiledClass>, method: &str) -> bool {
    while let Some(c) = class {
        if c.decl().method(method).is_some() {
            return true;
        }
        class = c.parent().map(|p| &**p);
    }
    false
}
