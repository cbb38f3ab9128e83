use std::any::Any;
use std::fmt;
use std::rc::Rc;

use crate::value::Value;

pub type ToTextHook = Rc<dyn Fn(&dyn Any) -> Result<String, String>>;
pub type FromGenericHook = Rc<dyn Fn(&Value) -> Result<Box<dyn Any>, String>>;
pub type DuplicateHook = Rc<dyn Fn(&dyn Any) -> Box<dyn Any>>;
pub type FootprintHook = Rc<dyn Fn(&dyn Any) -> usize>;

/// Describes a host type that can live inside a [`Value`].
///
/// `duplicate` is mandatory: it is what copy-on-write calls when a shared
/// native value is about to be mutated. The text hooks are optional; without
/// `to_text` the value cannot be rendered, without `from_generic` generic
/// values cannot be converted into it.
#[derive(Clone)]
pub struct NativeTypeDescriptor {
    pub type_name: String,
    pub to_text: Option<ToTextHook>,
    pub from_generic: Option<FromGenericHook>,
    pub duplicate: Option<DuplicateHook>,
    pub footprint: Option<FootprintHook>,
}

impl NativeTypeDescriptor {
    /// A descriptor with no hooks set.
    pub fn named(type_name: impl Into<String>) -> Self {
        NativeTypeDescriptor {
            type_name: type_name.into(),
            to_text: None,
            from_generic: None,
            duplicate: None,
            footprint: None,
        }
    }

    /// A descriptor for a `Clone` type: `duplicate` clones, the footprint
    /// defaults to `size_of::<T>()`.
    pub fn for_type<T: Clone + 'static>(type_name: impl Into<String>) -> Self {
        let mut d = Self::named(type_name);
        d.duplicate = Some(Rc::new(|any: &dyn Any| {
            let t = any.downcast_ref::<T>().expect("native instance of the wrong type");
            Box::new(t.clone()) as Box<dyn Any>
        }));
        d.footprint = Some(Rc::new(|_: &dyn Any| std::mem::size_of::<T>()));
        d
    }

    pub fn with_to_text<T: 'static>(
        mut self,
        f: impl Fn(&T) -> Result<String, String> + 'static,
    ) -> Self {
        self.to_text = Some(Rc::new(move |any: &dyn Any| match any.downcast_ref::<T>() {
            Some(t) => f(t),
            None => Err("native instance of the wrong type".into()),
        }));
        self
    }

    pub fn with_from_generic<T: 'static>(
        mut self,
        f: impl Fn(&Value) -> Result<T, String> + 'static,
    ) -> Self {
        self.from_generic = Some(Rc::new(move |v: &Value| {
            f(v).map(|t| Box::new(t) as Box<dyn Any>)
        }));
        self
    }

    pub fn with_footprint<T: 'static>(mut self, f: impl Fn(&T) -> usize + 'static) -> Self {
        self.footprint = Some(Rc::new(move |any: &dyn Any| {
            any.downcast_ref::<T>().map(&f).unwrap_or(0)
        }));
        self
    }

    pub fn without_duplicate(mut self) -> Self {
        self.duplicate = None;
        self
    }

    pub(crate) fn footprint_of(&self, data: &dyn Any) -> usize {
        self.footprint.as_ref().map(|f| f(data)).unwrap_or(0)
    }
}

impl fmt::Debug for NativeTypeDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("NativeTypeDescriptor")
            .field("type_name", &self.type_name)
            .field("to_text", &self.to_text.is_some())
            .field("from_generic", &self.from_generic.is_some())
            .field("duplicate", &self.duplicate.is_some())
            .finish()
    }
}
