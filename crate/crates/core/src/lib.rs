pub mod baseline;
pub mod compiler;
pub mod corpus;
pub mod dsl;
pub mod error;
pub mod harness;
pub mod native;
pub mod runtime;
pub mod value;

pub use compiler::{expand, CompiledClass, FieldSlot, MethodBinding};
pub use dsl::{parse_class, parse_classes, ClassDecl, TypeTag, Visibility};
pub use error::{Error, Result};
pub use runtime::{Call, Convention, Environment, Receiver, Registry};
pub use value::{Kind, Value};
