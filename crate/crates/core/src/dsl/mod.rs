//! Class-declaration language.
//!
//! ```text
//! voo::class Name ?-virtual? ?-extends Parent? {
//!     public  { type_t ?-static? field default ; method ... }
//!     private { ... }
//!     method name ?modifiers? {params} ?modifiers? {body}
//!     constructor {params} {body}
//!     importMethods {a b}
//! }
//! ```

pub mod lexer;
mod parser;

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::value::Value;

pub use parser::{parse_class, parse_classes};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum TypeTag {
    #[serde(rename = "double_t")]
    Double,
    #[serde(rename = "int_t")]
    Int,
    #[serde(rename = "string_t")]
    String,
    #[serde(rename = "bool_t")]
    Bool,
    #[serde(rename = "list_t")]
    List,
    #[serde(rename = "dict_t")]
    Dict,
    #[serde(rename = "obj_t")]
    Obj,
}

impl TypeTag {
    pub const ALL: [TypeTag; 7] = [
        TypeTag::Double,
        TypeTag::Int,
        TypeTag::String,
        TypeTag::Bool,
        TypeTag::List,
        TypeTag::Dict,
        TypeTag::Obj,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            TypeTag::Double => "double_t",
            TypeTag::Int => "int_t",
            TypeTag::String => "string_t",
            TypeTag::Bool => "bool_t",
            TypeTag::List => "list_t",
            TypeTag::Dict => "dict_t",
            TypeTag::Obj => "obj_t",
        }
    }
}

impl FromStr for TypeTag {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        TypeTag::ALL.into_iter().find(|t| t.as_str() == s).ok_or(())
    }
}

impl fmt::Display for TypeTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Visibility {
    Public,
    Private,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FieldDecl {
    pub type_tag: TypeTag,
    pub name: String,
    pub default_value: Value,
    pub is_static: bool,
    pub visibility: Visibility,
    #[serde(skip)]
    pub line: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Modifiers {
    #[serde(rename = "static")]
    pub is_static: bool,
    pub upvar: bool,
    /// Fields detached for the duration of the body.
    pub update: Option<Vec<String>>,
    #[serde(rename = "override")]
    pub is_override: bool,
    #[serde(rename = "virtual")]
    pub is_virtual: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MethodDecl {
    pub name: String,
    pub params: Vec<String>,
    pub modifiers: Modifiers,
    pub body_text: String,
    pub visibility: Visibility,
    #[serde(skip)]
    pub line: usize,
}

impl MethodDecl {
    /// `args` as the last parameter makes the method variadic.
    pub fn is_variadic(&self) -> bool {
        self.params.last().map(String::as_str) == Some("args")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConstructorDecl {
    pub params: Vec<String>,
    pub body_text: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassDecl {
    pub name: String,
    pub parent: Option<String>,
    pub is_virtual: bool,
    pub fields: Vec<FieldDecl>,
    pub methods: Vec<MethodDecl>,
    pub custom_constructor: Option<ConstructorDecl>,
    pub imports: Vec<String>,
}

impl ClassDecl {
    pub fn instance_fields(&self) -> impl Iterator<Item = &FieldDecl> {
        self.fields.iter().filter(|f| !f.is_static)
    }

    pub fn static_fields(&self) -> impl Iterator<Item = &FieldDecl> {
        self.fields.iter().filter(|f| f.is_static)
    }

    pub fn method(&self, name: &str) -> Option<&MethodDecl> {
        self.methods.iter().find(|m| m.name == name)
    }
}
