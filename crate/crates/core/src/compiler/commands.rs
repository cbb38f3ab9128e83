use std::rc::Rc;

use crate::dsl::{MethodDecl, Visibility};
use crate::error::{Error, Result};
use crate::runtime::{call_method, Command, Convention, Environment, Registry};
use crate::value::Value;

use super::CompiledClass;

fn command(
    f: impl Fn(&Registry, &mut Environment, &[Value]) -> Result<Value> + 'static,
) -> Command {
    Rc::new(f)
}

pub(crate) fn check_arity(command: &str, args: &[Value], n: usize) -> Result<()> {
    if args.len() == n {
        Ok(())
    } else {
        Err(Error::Arity {
            command: command.to_string(),
            expected: n.to_string(),
            actual: args.len(),
        })
    }
}

fn check_min_arity(command: &str, args: &[Value], n: usize) -> Result<()> {
    if args.len() >= n {
        Ok(())
    } else {
        Err(Error::Arity {
            command: command.to_string(),
            expected: format!("at least {n}"),
            actual: args.len(),
        })
    }
}

/// Detach each `(slot, temp)` of the object bound to `var` into `temp`,
/// run `body`, then write every temporary back whatever `body` returned.
/// With `keep` the temporaries stay bound afterwards.
pub(crate) fn with_detached<R>(
    env: &mut Environment,
    var: &str,
    slots: &[(usize, &str)],
    keep: bool,
    body: impl FnOnce(&mut Environment) -> Result<R>,
) -> Result<R> {
    let mut detached = 0;
    let mut result = None;
    for &(idx, temp) in slots {
        match env
            .get_mut(var)
            .and_then(|obj| obj.list_replace(idx, Value::empty()))
        {
            Ok(old) => {
                env.set(temp, old);
                detached += 1;
            }
            Err(e) => {
                result = Some(Err(e));
                break;
            }
        }
    }
    let result = result.unwrap_or_else(|| body(env));
    let reattached = reattach(env, var, &slots[..detached], keep);
    match (result, reattached) {
        (Err(e), _) | (Ok(_), Err(e)) => Err(e),
        (Ok(v), Ok(())) => Ok(v),
    }
}

fn reattach(env: &mut Environment, var: &str, slots: &[(usize, &str)], keep: bool) -> Result<()> {
    let mut first_err = None;
    for &(idx, temp) in slots {
        let v = if keep {
            env.get(temp).ok()
        } else {
            env.unset(temp)
        };
        let missing = v.is_none();
        let written = env
            .get_mut(var)
            .and_then(|obj| obj.list_set(idx, v.unwrap_or_else(Value::empty)));
        match written {
            Err(e) => {
                first_err.get_or_insert(e);
            }
            Ok(()) if missing => {
                first_err.get_or_insert(Error::UnboundVariable(temp.to_string()));
            }
            Ok(()) => {}
        }
    }
    first_err.map_or(Ok(()), Err)
}

/// Pick the class whose body a virtual call on `obj` runs: the nearest class
/// on the tag class's ancestor chain (stopping at `current`) that defines
/// `key` and has a bound body, else `current` itself.
pub(crate) fn resolve_virtual(
    reg: &Registry,
    current: &str,
    obj: &Value,
    key: &str,
) -> Result<Rc<CompiledClass>> {
    let tag = obj.list_get(0)?;
    let tag = tag.to_text()?;
    let tag_class = tag.strip_prefix("::").unwrap_or(tag);
    if tag_class != current {
        let mut k = reg
            .class(tag_class)
            .ok_or_else(|| {
                Error::Dispatch(format!("object tag \"{tag}\" names no registered class"))
            })?
            .clone();
        loop {
            if k.name() == current {
                break;
            }
            if k.defines(key) && reg.has_body(k.name(), key) {
                return Ok(k);
            }
            match k.parent() {
                Some(p) => k = p.clone(),
                None => break,
            }
        }
    }
    let cur = reg
        .class(current)
        .ok_or_else(|| Error::UnknownClass(current.to_string()))?;
    Ok(cur.clone())
}

pub(crate) fn dispatch(
    reg: &Registry,
    env: &mut Environment,
    current: &str,
    key: &str,
    decl: &MethodDecl,
    cmd: &str,
    args: &[Value],
) -> Result<Value> {
    check_min_arity(cmd, args, 1)?;
    let obj = match Convention::of(&decl.modifiers) {
        Convention::ByName => env.get(args[0].to_text()?)?,
        _ => args[0].clone(),
    };
    let target = resolve_virtual(reg, current, &obj, key)?;
    drop(obj);
    let decl = &target
        .method(key)
        .ok_or_else(|| Error::UnknownMethod {
            class: target.name().to_string(),
            method: key.to_string(),
        })?
        .decl;
    call_method(reg, env, target.name(), key, decl, cmd, args)
}

/// Every command a compiled class contributes, in a stable order.
pub(crate) fn generate(cls: &Rc<CompiledClass>) -> Vec<(String, Command)> {
    let n = cls.name().to_string();
    let q = |s: &str| format!("{n}::{s}");
    let mut out: Vec<(String, Command)> = Vec::new();

    match cls.constructor() {
        Some(decl) => {
            let decl = decl.clone();
            let owner = n.clone();
            let cmd = q("new");
            out.push((
                cmd.clone(),
                command(move |reg, env, args| {
                    call_method(reg, env, &owner, "constructor", &decl, &cmd, args)
                }),
            ));
        }
        None => {
            let c = cls.clone();
            out.push((q("new"), command(move |_, _, args| c.construct_positional(args))));
        }
    }
    let c = cls.clone();
    let cmd = q("new()");
    out.push((
        cmd.clone(),
        command(move |_, _, args| {
            check_arity(&cmd, args, 0)?;
            Ok(c.construct_default())
        }),
    ));
    let c = cls.clone();
    out.push((q("new.args"), command(move |_, _, args| c.construct_named(args))));

    for f in cls.fields() {
        let p = match f.visibility {
            Visibility::Public => "",
            Visibility::Private => "my.",
        };
        let idx = f.index;

        let cmd = q(&format!("{p}get.{}", f.name));
        out.push((
            cmd.clone(),
            command(move |_, _, args| {
                check_arity(&cmd, args, 1)?;
                args[0].list_get(idx)
            }),
        ));

        let cmd = q(&format!("{p}set.{}", f.name));
        out.push((
            cmd.clone(),
            command(move |_, env, args| {
                check_arity(&cmd, args, 2)?;
                env.get_mut(args[0].to_text()?)?
                    .list_set(idx, args[1].clone())?;
                Ok(Value::empty())
            }),
        ));

        let cmd = q(&format!("{p}update.{}", f.name));
        out.push((
            cmd.clone(),
            command(move |reg, env, args| {
                check_min_arity(&cmd, args, 3)?;
                let var = args[0].to_text()?;
                let temp = args[1].to_text()?;
                let body = args[2].to_text()?;
                with_detached(env, var, &[(idx, temp)], true, |env| {
                    reg.invoke(body, env, &args[3..])
                })
            }),
        ));
    }

    for s in cls.static_names() {
        let p = match cls.static_visibility(&s) {
            Some(Visibility::Private) => "my.",
            _ => "",
        };
        let c = cls.clone();
        let cmd = q(&format!("{p}class.get.{s}"));
        let name = s.clone();
        out.push((
            cmd.clone(),
            command(move |_, _, args| {
                check_arity(&cmd, args, 0)?;
                c.static_get(&name)
            }),
        ));
        let c = cls.clone();
        let cmd = q(&format!("{p}class.set.{s}"));
        out.push((
            cmd.clone(),
            command(move |_, _, args| {
                check_arity(&cmd, args, 1)?;
                c.static_set(&s, args[0].clone())?;
                Ok(Value::empty())
            }),
        ));
    }

    for b in cls.methods().values() {
        let cmd = q(&b.key);
        let owner = b.owner.clone();
        let key = b.key.clone();
        let decl = b.decl.clone();
        if b.dispatcher {
            if !b.imported {
                let base = q(&b.base_key());
                let (owner, key, decl) = (owner.clone(), key.clone(), decl.clone());
                out.push((
                    base.clone(),
                    command(move |reg, env, args| {
                        call_method(reg, env, &owner, &key, &decl, &base, args)
                    }),
                ));
            }
            out.push((
                cmd.clone(),
                command(move |reg, env, args| dispatch(reg, env, &owner, &key, &decl, &cmd, args)),
            ));
        } else {
            out.push((
                cmd.clone(),
                command(move |reg, env, args| call_method(reg, env, &owner, &key, &decl, &cmd, args)),
            ));
        }
    }
    out
}
