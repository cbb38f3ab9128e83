//! Command registry, compiled classes and host-bound method bodies.

mod env;

use std::cell::RefCell;
use std::collections::HashMap;
use std::rc::Rc;

use crate::compiler::{self, CompiledClass};
use crate::dsl::{self, ClassDecl, MethodDecl, Modifiers};
use crate::error::{Error, Result};
use crate::native::NativeTypeDescriptor;
use crate::value::{Interner, Value};

pub use env::Environment;

/// A registered command. Commands run in the caller's frame of `env`.
pub type Command = Rc<dyn Fn(&Registry, &mut Environment, &[Value]) -> Result<Value>>;

/// A host-bound method body.
pub type HostFn = Rc<dyn Fn(&mut Call<'_>) -> Result<Value>>;

/// How a method receives its object.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Convention {
    /// The object itself, as a value.
    Value,
    /// The name of the caller's variable holding the object.
    ByName,
    /// No object.
    Static,
}

impl Convention {
    pub fn of(m: &Modifiers) -> Convention {
        if m.is_static {
            Convention::Static
        } else if m.upvar || m.update.is_some() {
            Convention::ByName
        } else {
            Convention::Value
        }
    }
}

#[derive(Debug, Clone)]
pub enum Receiver {
    None,
    Value(Value),
    /// A local variable linked to the caller's binding.
    Var(String),
}

/// What a host body sees: the runtime, its own frame and its arguments.
pub struct Call<'a> {
    pub registry: &'a Registry,
    pub env: &'a mut Environment,
    pub receiver: Receiver,
    /// Arguments after the receiver.
    pub args: &'a [Value],
    /// Class whose body is running.
    pub class: &'a str,
}

impl Call<'_> {
    /// The receiver object.
    pub fn this(&self) -> Result<Value> {
        match &self.receiver {
            Receiver::Value(v) => Ok(v.clone()),
            Receiver::Var(n) => self.env.get(n),
            Receiver::None => Err(Error::host("static method has no this")),
        }
    }

    /// The receiver for in-place mutation. Writes through a by-name receiver
    /// reach the caller; writes to a by-value receiver stay local.
    pub fn this_mut(&mut self) -> Result<&mut Value> {
        match &mut self.receiver {
            Receiver::Value(v) => Ok(v),
            Receiver::Var(n) => self.env.get_mut(n),
            Receiver::None => Err(Error::host("static method has no this")),
        }
    }

    pub fn arg(&self, i: usize) -> Result<&Value> {
        self.args
            .get(i)
            .ok_or_else(|| Error::host(format!("missing argument {i}")))
    }

    pub fn var(&self, name: &str) -> Result<Value> {
        self.env.get(name)
    }

    pub fn set_var(&mut self, name: &str, v: Value) {
        self.env.set(name, v)
    }

    fn slot(&self, field: &str) -> Result<usize> {
        let cls = self
            .registry
            .class(self.class)
            .ok_or_else(|| Error::UnknownClass(self.class.to_string()))?;
        cls.slot_of(field).ok_or_else(|| Error::UnknownField {
            class: self.class.to_string(),
            field: field.to_string(),
        })
    }

    /// Read a field of the receiver, private fields included.
    pub fn field(&self, field: &str) -> Result<Value> {
        let idx = self.slot(field)?;
        match &self.receiver {
            Receiver::Value(v) => v.list_get(idx),
            Receiver::Var(n) => self.env.get_ref(n)?.list_get(idx),
            Receiver::None => Err(Error::host("static method has no this")),
        }
    }

    pub fn set_field(&mut self, field: &str, v: Value) -> Result<()> {
        let idx = self.slot(field)?;
        self.this_mut()?.list_set(idx, v)
    }

    pub fn invoke(&mut self, command: &str, args: &[Value]) -> Result<Value> {
        self.registry.invoke(command, self.env, args)
    }
}

pub struct Registry {
    commands: HashMap<String, Command>,
    classes: HashMap<String, Rc<CompiledClass>>,
    class_commands: HashMap<String, Vec<String>>,
    bodies: HashMap<String, HashMap<String, HostFn>>,
    interner: RefCell<Interner>,
    pub(crate) natives: HashMap<String, Rc<NativeTypeDescriptor>>,
    allow_replace: bool,
}

impl Default for Registry {
    fn default() -> Self {
        Self::new()
    }
}

impl std::fmt::Debug for Registry {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Registry")
            .field("commands", &self.commands.len())
            .field("classes", &self.classes.keys().collect::<Vec<_>>())
            .field("allow_replace", &self.allow_replace)
            .finish()
    }
}

impl Registry {
    /// A registry in which commands and classes may be redefined.
    pub fn new() -> Self {
        Registry {
            commands: HashMap::new(),
            classes: HashMap::new(),
            class_commands: HashMap::new(),
            bodies: HashMap::new(),
            interner: RefCell::new(Interner::new()),
            natives: HashMap::new(),
            allow_replace: true,
        }
    }

    /// A registry that rejects redefinition of commands and classes.
    pub fn strict() -> Self {
        Registry {
            allow_replace: false,
            ..Self::new()
        }
    }

    pub fn allows_replace(&self) -> bool {
        self.allow_replace
    }

    pub fn intern(&self, s: &str) -> Value {
        self.interner.borrow_mut().intern(s)
    }

    pub fn interned_count(&self) -> usize {
        self.interner.borrow().len()
    }

    // ---- commands ----------------------------------------------------------

    pub fn register_command(
        &mut self,
        name: &str,
        f: impl Fn(&Registry, &mut Environment, &[Value]) -> Result<Value> + 'static,
    ) -> Result<()> {
        self.insert_command(name, Rc::new(f))
    }

    pub(crate) fn insert_command(&mut self, name: &str, f: Command) -> Result<()> {
        if !self.allow_replace && self.commands.contains_key(name) {
            return Err(Error::DuplicateCommand(name.to_string()));
        }
        self.commands.insert(name.to_string(), f);
        Ok(())
    }

    pub fn has_command(&self, name: &str) -> bool {
        self.commands.contains_key(name)
    }

    /// Sorted names of all commands starting with `prefix`.
    pub fn command_names(&self, prefix: &str) -> Vec<String> {
        let mut v: Vec<String> = self
            .commands
            .keys()
            .filter(|k| k.starts_with(prefix))
            .cloned()
            .collect();
        v.sort();
        v
    }

    pub fn invoke(&self, name: &str, env: &mut Environment, args: &[Value]) -> Result<Value> {
        let f = self
            .commands
            .get(name)
            .ok_or_else(|| Error::UnknownCommand(name.to_string()))?;
        f(self, env, args)
    }

    // ---- classes -----------------------------------------------------------

    pub fn class(&self, name: &str) -> Option<&Rc<CompiledClass>> {
        self.classes.get(name.strip_prefix("::").unwrap_or(name))
    }

    pub fn class_names(&self) -> Vec<String> {
        let mut v: Vec<String> = self.classes.keys().cloned().collect();
        v.sort();
        v
    }

    /// Commands generated for class `name`, in generation order.
    pub fn class_command_names(&self, name: &str) -> &[String] {
        self.class_commands.get(name).map_or(&[], Vec::as_slice)
    }

    /// Compile `d` and install its commands. Redeclaring a class replaces the
    /// old one and its commands in one step.
    pub fn compile_class(&mut self, d: &ClassDecl) -> Result<Rc<CompiledClass>> {
        if !self.allow_replace && self.classes.contains_key(&d.name) {
            return Err(Error::DuplicateClass(d.name.clone()));
        }
        let cls = Rc::new(CompiledClass::build(d, self)?);
        let generated = compiler::generate(&cls);
        if !self.allow_replace {
            if let Some((name, _)) = generated.iter().find(|(n, _)| self.commands.contains_key(n)) {
                return Err(Error::DuplicateCommand(name.clone()));
            }
        }
        if let Some(old) = self.class_commands.remove(&d.name) {
            for name in old {
                self.commands.remove(&name);
            }
        }
        let names = generated.iter().map(|(n, _)| n.clone()).collect();
        self.commands.extend(generated);
        self.class_commands.insert(d.name.clone(), names);
        self.classes.insert(d.name.clone(), cls.clone());
        Ok(cls)
    }

    /// Parse and compile every class declared in `src`.
    pub fn declare(&mut self, src: &str) -> Result<Vec<Rc<CompiledClass>>> {
        dsl::parse_classes(src)?
            .iter()
            .map(|d| self.compile_class(d))
            .collect()
    }

    // ---- method bodies -------------------------------------------------------

    /// Bind the body of `method` (declared on `class`, or `constructor`).
    /// Private methods may be named with or without their `my.` prefix.
    pub fn bind_method(
        &mut self,
        class: &str,
        method: &str,
        f: impl Fn(&mut Call<'_>) -> Result<Value> + 'static,
    ) -> Result<()> {
        let cls = self
            .class(class)
            .ok_or_else(|| Error::UnknownClass(class.to_string()))?;
        let is_ctor = method == "constructor" && cls.constructor().is_some();
        let key = if is_ctor || cls.defines(method) {
            method.to_string()
        } else if cls.defines(&format!("my.{method}")) {
            format!("my.{method}")
        } else {
            return Err(Error::UnknownMethod {
                class: class.to_string(),
                method: method.to_string(),
            });
        };
        let class = cls.name().to_string();
        self.bodies.entry(class).or_default().insert(key, Rc::new(f));
        Ok(())
    }

    pub fn has_body(&self, class: &str, key: &str) -> bool {
        self.body(class, key).is_some()
    }

    fn body(&self, class: &str, key: &str) -> Option<&HostFn> {
        self.bodies.get(class)?.get(key)
    }

    /// Call virtual `method` of `base` on `obj`, routed by the object's tag.
    pub fn dispatch_virtual(
        &self,
        env: &mut Environment,
        base: &str,
        method: &str,
        obj: Value,
        args: &[Value],
    ) -> Result<Value> {
        self.virtual_binding(base, method)?;
        let mut full = Vec::with_capacity(args.len() + 1);
        full.push(obj);
        full.extend_from_slice(args);
        self.invoke(&format!("{base}::{method}"), env, &full)
    }

    /// Run `class`'s own body of virtual `method`, bypassing dispatch.
    pub fn base_call(
        &self,
        env: &mut Environment,
        class: &str,
        method: &str,
        obj: Value,
        args: &[Value],
    ) -> Result<Value> {
        let b = self.virtual_binding(class, method)?;
        let mut full = Vec::with_capacity(args.len() + 1);
        full.push(obj);
        full.extend_from_slice(args);
        self.invoke(&format!("{class}::{}", b.base_key()), env, &full)
    }

    fn virtual_binding(&self, class: &str, method: &str) -> Result<&compiler::MethodBinding> {
        let cls = self
            .class(class)
            .ok_or_else(|| Error::UnknownClass(class.to_string()))?;
        let b = cls.method(method).ok_or_else(|| Error::UnknownMethod {
            class: class.to_string(),
            method: method.to_string(),
        })?;
        if !b.dispatcher || b.imported {
            return Err(Error::Dispatch(format!(
                "{class}::{method} is not virtual; no base.{method} exists"
            )));
        }
        Ok(b)
    }
}

/// Run the host body of `owner`'s method `key` under the convention derived
/// from `decl`. Arguments are checked, a frame is pushed for the body and
/// `-update` fields are detached around it.
pub(crate) fn call_method(
    reg: &Registry,
    env: &mut Environment,
    owner: &str,
    key: &str,
    decl: &MethodDecl,
    command: &str,
    args: &[Value],
) -> Result<Value> {
    let conv = Convention::of(&decl.modifiers);
    let recv = usize::from(conv != Convention::Static);
    let variadic = decl.is_variadic();
    let fixed = decl.params.len() - usize::from(variadic);
    let arity_ok = if variadic {
        args.len() >= fixed + recv
    } else {
        args.len() == fixed + recv
    };
    if !arity_ok {
        return Err(Error::Arity {
            command: command.to_string(),
            expected: if variadic {
                format!("at least {}", fixed + recv)
            } else {
                (fixed + recv).to_string()
            },
            actual: args.len(),
        });
    }
    let body = reg
        .body(owner, key)
        .ok_or_else(|| Error::UnboundMethod {
            class: owner.to_string(),
            method: decl.name.clone(),
        })?
        .clone();
    let rest = &args[recv..];

    env.push_frame();
    let receiver = match conv {
        Convention::Static => Receiver::None,
        Convention::Value => Receiver::Value(args[0].clone()),
        Convention::ByName => match args[0].to_text() {
            Ok(name) => {
                let caller = env.current_frame() - 1;
                env.link("this", caller, name);
                Receiver::Var("this".into())
            }
            Err(e) => {
                env.pop_frame();
                return Err(e);
            }
        },
    };
    for (i, p) in decl.params.iter().take(fixed).enumerate() {
        env.set(p, rest[i].clone());
    }
    if variadic {
        env.set("args", Value::list(rest[fixed..].to_vec()));
    }

    let run = |env: &mut Environment, receiver: Receiver| {
        body(&mut Call {
            registry: reg,
            env,
            receiver,
            args: rest,
            class: owner,
        })
    };
    let result = match &decl.modifiers.update {
        Some(fields) => match reg.class(owner) {
            Some(cls) => {
                let slots: Result<Vec<(usize, &str)>> = fields
                    .iter()
                    .map(|f| {
                        cls.slot_of(f).map(|i| (i, f.as_str())).ok_or_else(|| {
                            Error::UnknownField {
                                class: owner.to_string(),
                                field: f.clone(),
                            }
                        })
                    })
                    .collect();
                slots.and_then(|slots| {
                    compiler::with_detached(env, "this", &slots, false, |env| run(env, receiver))
                })
            }
            None => Err(Error::UnknownClass(owner.to_string())),
        },
        None => run(env, receiver),
    };
    env.pop_frame();
    result
}
