//! Host record types living inside values, and classes built on them.
//!
//! A native class exposes the same command shapes as a declared class
//! (`new`, `new()`, `new.args`, `get.f`, `set.f`, `update.f`, methods), so a
//! call site only changes its namespace prefix when switching between the
//! two.

mod descriptor;
pub mod point;

use std::rc::Rc;

use crate::error::{Error, Result};
use crate::runtime::{Command, Environment, Registry};
use crate::value::{NativeInstance, Value};

pub use descriptor::NativeTypeDescriptor;
pub use point::NativePoint;

impl Registry {
    /// Register a native type. The descriptor must carry a `duplicate` hook.
    pub fn register_native_type(
        &mut self,
        d: NativeTypeDescriptor,
    ) -> Result<Rc<NativeTypeDescriptor>> {
        if self.natives.contains_key(&d.type_name) {
            return Err(Error::DuplicateNativeType(d.type_name));
        }
        if d.duplicate.is_none() {
            return Err(Error::MissingHook {
                type_name: d.type_name,
                hook: "duplicate",
            });
        }
        let d = Rc::new(d);
        self.natives.insert(d.type_name.clone(), d.clone());
        Ok(d)
    }

    pub fn native_type(&self, type_name: &str) -> Option<&Rc<NativeTypeDescriptor>> {
        self.natives.get(type_name)
    }

    /// Install the commands of a native class.
    pub fn register_native_class<T: 'static>(&mut self, spec: NativeClassSpec<T>) -> Result<()> {
        let generated = spec.generate();
        if !self.allows_replace() {
            if let Some((n, _)) = generated.iter().find(|(n, _)| self.has_command(n)) {
                return Err(Error::DuplicateCommand(n.clone()));
            }
        }
        for (name, cmd) in generated {
            self.insert_command(&name, cmd)?;
        }
        Ok(())
    }
}

/// Wrap `data` in a fresh value of the descriptor's type.
pub fn native_value<T: 'static>(d: &Rc<NativeTypeDescriptor>, data: T) -> Value {
    Value::new_native(NativeInstance {
        descriptor: d.clone(),
        data: Box::new(data),
    })
}

/// Make `v` hold an instance of `d`'s type. A value already of that type is
/// left alone; anything else goes through the `from_generic` hook and keeps
/// its text form. On failure `v` is untouched.
pub fn value_to_native(v: &mut Value, d: &Rc<NativeTypeDescriptor>) -> Result<()> {
    if let Some(n) = v.as_native() {
        if n.type_name() == d.type_name {
            return Ok(());
        }
    }
    let fail = |reason: String| Error::Conversion {
        type_name: d.type_name.clone(),
        reason,
    };
    let hook = d
        .from_generic
        .as_ref()
        .ok_or_else(|| fail("no conversion from generic values".into()))?;
    let data = hook(v).map_err(fail)?;
    let text = v.to_text().ok().map(str::to_string);
    let converted = Value::new_native(NativeInstance {
        descriptor: d.clone(),
        data,
    });
    if let Some(t) = text {
        converted.seed_text(&t);
    }
    *v = converted;
    Ok(())
}

/// Borrow the `T` inside a native value of type `d`.
pub fn native_ref<'a, T: 'static>(v: &'a Value, d: &NativeTypeDescriptor) -> Option<&'a T> {
    v.as_native()
        .filter(|n| n.type_name() == d.type_name)
        .and_then(|n| n.downcast_ref())
}

/// Run `f` on the `T` of `v`, converting first; `f` sees the instance as
/// it is read through a value (conversion of a clone, `v` is not changed).
fn with_instance<T: 'static, R>(
    v: &Value,
    d: &Rc<NativeTypeDescriptor>,
    f: impl FnOnce(&T) -> R,
) -> Result<R> {
    if let Some(t) = native_ref::<T>(v, d) {
        return Ok(f(t));
    }
    let mut c = v.clone();
    value_to_native(&mut c, d)?;
    let t = native_ref::<T>(&c, d).ok_or_else(|| Error::Type {
        expected: "native instance",
        found: v.kind().name().to_string(),
    })?;
    Ok(f(t))
}

/// Mutate the `T` held in `v`, converting it in place first. Shared values
/// are duplicated through the descriptor before the write.
fn mutate_instance<T: 'static, R>(
    v: &mut Value,
    d: &Rc<NativeTypeDescriptor>,
    f: impl FnOnce(&mut T) -> R,
) -> Result<R> {
    value_to_native(v, d)?;
    v.native_mut(|n| n.downcast_mut::<T>().map(f))
        .flatten()
        .ok_or_else(|| Error::Type {
            expected: "native instance",
            found: d.type_name.clone(),
        })
}

type Getter<T> = Rc<dyn Fn(&T) -> Value>;
type Setter<T> = Rc<dyn Fn(&mut T, &Value) -> std::result::Result<(), String>>;
type NativeMethod<T> = Rc<dyn Fn(&T, &[Value]) -> Result<Value>>;
type Ctor<T> = Rc<dyn Fn(&[Value]) -> std::result::Result<T, String>>;

struct NativeField<T> {
    name: String,
    get: Getter<T>,
    set: Setter<T>,
}

/// Declarative description of a native class.
pub struct NativeClassSpec<T> {
    class_name: String,
    descriptor: Rc<NativeTypeDescriptor>,
    construct: Ctor<T>,
    default: Rc<dyn Fn() -> T>,
    fields: Vec<NativeField<T>>,
    methods: Vec<(String, NativeMethod<T>)>,
}

impl<T: 'static> NativeClassSpec<T> {
    pub fn new(
        class_name: impl Into<String>,
        descriptor: Rc<NativeTypeDescriptor>,
        construct: impl Fn(&[Value]) -> std::result::Result<T, String> + 'static,
        default: impl Fn() -> T + 'static,
    ) -> Self {
        NativeClassSpec {
            class_name: class_name.into(),
            descriptor,
            construct: Rc::new(construct),
            default: Rc::new(default),
            fields: Vec::new(),
            methods: Vec::new(),
        }
    }

    pub fn field(
        mut self,
        name: impl Into<String>,
        get: impl Fn(&T) -> Value + 'static,
        set: impl Fn(&mut T, &Value) -> std::result::Result<(), String> + 'static,
    ) -> Self {
        self.fields.push(NativeField {
            name: name.into(),
            get: Rc::new(get),
            set: Rc::new(set),
        });
        self
    }

    /// A method receiving the instance by value.
    pub fn method(
        mut self,
        name: impl Into<String>,
        f: impl Fn(&T, &[Value]) -> Result<Value> + 'static,
    ) -> Self {
        self.methods.push((name.into(), Rc::new(f)));
        self
    }

    /// Command names this spec produces, in registration order.
    pub fn command_names(&self) -> Vec<String> {
        self.generate().into_iter().map(|(n, _)| n).collect()
    }

    fn generate(&self) -> Vec<(String, Command)> {
        let n = &self.class_name;
        let q = |s: &str| format!("{n}::{s}");
        let d = &self.descriptor;
        let mut out: Vec<(String, Command)> = Vec::new();

        let (ctor, dd, cmd) = (self.construct.clone(), d.clone(), q("new"));
        out.push((
            cmd,
            Rc::new(move |_: &Registry, _: &mut Environment, args: &[Value]| {
                ctor(args)
                    .map(|t| native_value(&dd, t))
                    .map_err(|reason| Error::Conversion {
                        type_name: dd.type_name.clone(),
                        reason,
                    })
            }),
        ));

        let shared_default = native_value(d, (self.default)());
        let cmd = q("new()");
        let dflt = shared_default.clone();
        out.push((
            cmd.clone(),
            Rc::new(move |_: &Registry, _: &mut Environment, args: &[Value]| {
                crate::compiler::check_arity(&cmd, args, 0)?;
                Ok(dflt.clone())
            }),
        ));

        let setters: Vec<(String, Setter<T>)> = self
            .fields
            .iter()
            .map(|f| (f.name.clone(), f.set.clone()))
            .collect();
        let dd = d.clone();
        out.push((
            q("new.args"),
            Rc::new(move |_: &Registry, _: &mut Environment, args: &[Value]| {
                if !args.len().is_multiple_of(2) {
                    return Err(Error::Constructor(
                        "Constructor argument must be a list of '-<field> <value>' pairs".into(),
                    ));
                }
                let mut obj = shared_default.clone();
                for pair in args.chunks(2) {
                    let key = pair[0].to_text()?;
                    let Some(field) = key.strip_prefix('-') else {
                        return Err(Error::Constructor(format!(
                            "Constructor argument keys must start with '-', got '{key}'"
                        )));
                    };
                    let set = setters
                        .iter()
                        .find(|(n, _)| n == field)
                        .map(|(_, s)| s.clone())
                        .ok_or_else(|| {
                            Error::Constructor(format!("Unknown field option: {field}"))
                        })?;
                    apply_setter(&mut obj, &dd, &set, &pair[1])?;
                }
                Ok(obj)
            }),
        ));

        for f in &self.fields {
            let (get, dd, cmd) = (f.get.clone(), d.clone(), q(&format!("get.{}", f.name)));
            out.push((
                cmd.clone(),
                Rc::new(move |_: &Registry, _: &mut Environment, args: &[Value]| {
                    crate::compiler::check_arity(&cmd, args, 1)?;
                    with_instance::<T, _>(&args[0], &dd, |t| get(t))
                }),
            ));

            let (set, dd, cmd) = (f.set.clone(), d.clone(), q(&format!("set.{}", f.name)));
            out.push((
                cmd.clone(),
                Rc::new(move |_: &Registry, env: &mut Environment, args: &[Value]| {
                    crate::compiler::check_arity(&cmd, args, 2)?;
                    let obj = env.get_mut(args[0].to_text()?)?;
                    apply_setter(obj, &dd, &set, &args[1])?;
                    Ok(Value::empty())
                }),
            ));

            let (get, set, dd) = (f.get.clone(), f.set.clone(), d.clone());
            let cmd = q(&format!("update.{}", f.name));
            out.push((
                cmd.clone(),
                Rc::new(move |reg: &Registry, env: &mut Environment, args: &[Value]| {
                    if args.len() < 3 {
                        return Err(Error::Arity {
                            command: cmd.clone(),
                            expected: "at least 3".into(),
                            actual: args.len(),
                        });
                    }
                    let var = args[0].to_text()?;
                    let temp = args[1].to_text()?;
                    let body = args[2].to_text()?;
                    let current = with_instance::<T, _>(env.get_ref(var)?, &dd, |t| get(t))?;
                    with_temp(
                        env,
                        temp,
                        current,
                        |env| reg.invoke(body, env, &args[3..]),
                        |env, v| {
                            let obj = env.get_mut(var)?;
                            apply_setter(obj, &dd, &set, &v)
                        },
                    )
                }),
            ));
        }

        for (name, m) in &self.methods {
            let (m, dd, cmd) = (m.clone(), d.clone(), q(name));
            out.push((
                cmd.clone(),
                Rc::new(move |_: &Registry, _: &mut Environment, args: &[Value]| {
                    if args.is_empty() {
                        return Err(Error::Arity {
                            command: cmd.clone(),
                            expected: "at least 1".into(),
                            actual: 0,
                        });
                    }
                    with_instance::<T, _>(&args[0], &dd, |t| m(t, &args[1..]))?
                }),
            ));
        }
        out
    }
}

fn apply_setter<T: 'static>(
    obj: &mut Value,
    d: &Rc<NativeTypeDescriptor>,
    set: &Setter<T>,
    v: &Value,
) -> Result<()> {
    mutate_instance::<T, _>(obj, d, |t| set(t, v))?.map_err(|reason| Error::Conversion {
        type_name: d.type_name.clone(),
        reason,
    })
}

/// Bind `temp` to `current`, run `body`, then hand the temporary's final
/// value to `write`, also when `body` fails.
fn with_temp(
    env: &mut Environment,
    temp: &str,
    current: Value,
    body: impl FnOnce(&mut Environment) -> Result<Value>,
    write: impl FnOnce(&mut Environment, Value) -> Result<()>,
) -> Result<Value> {
    env.set(temp, current);
    let result = body(env);
    let written = env.get(temp).and_then(|v| write(env, v));
    match (result, written) {
        (Err(e), _) | (Ok(_), Err(e)) => Err(e),
        (Ok(v), Ok(())) => Ok(v),
    }
}

#[cfg(test)]
mod tests;
