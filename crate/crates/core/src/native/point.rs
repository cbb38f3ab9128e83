//! The five-field benchmark point as a native type.

use std::rc::Rc;

use crate::error::Result;
use crate::runtime::Registry;
use crate::value::text::{format_bool, format_double, join_elements};
use crate::value::Value;

use super::{NativeClassSpec, NativeTypeDescriptor};

pub const TYPE_NAME: &str = "VooPoint";
pub const CLASS_NAME: &str = "CppVooPoint";

const SHAPE: &str = "Expected list of 5 elements: x y name id active";

#[derive(Debug, Clone, PartialEq)]
pub struct NativePoint {
    pub x: f64,
    pub y: f64,
    pub name: String,
    pub id: i64,
    pub active: bool,
}

impl Default for NativePoint {
    fn default() -> Self {
        NativePoint {
            x: 0.0,
            y: 0.0,
            name: "point".into(),
            id: 0,
            active: true,
        }
    }
}

impl NativePoint {
    pub fn distance(&self) -> f64 {
        (self.x * self.x + self.y * self.y).sqrt()
    }

    pub fn to_text(&self) -> String {
        let x = format_double(self.x);
        let y = format_double(self.y);
        let id = self.id.to_string();
        join_elements([
            x.as_str(),
            y.as_str(),
            self.name.as_str(),
            id.as_str(),
            format_bool(self.active),
        ])
    }

    /// Build from the five field values in declaration order.
    pub fn from_fields(vals: &[Value]) -> std::result::Result<Self, String> {
        let [x, y, name, id, active] = vals else {
            return Err(SHAPE.into());
        };
        let err = |f: &str, v: &Value| format!("bad value for {f}: \"{}\"", v.display_text());
        Ok(NativePoint {
            x: x.as_f64().map_err(|_| err("x", x))?,
            y: y.as_f64().map_err(|_| err("y", y))?,
            name: name.to_text().map_err(|_| err("name", name))?.to_string(),
            id: id.as_i64().map_err(|_| err("id", id))?,
            active: active.as_bool().map_err(|_| err("active", active))?,
        })
    }

    /// Parse a generic value holding a five-element list.
    pub fn from_generic(v: &Value) -> std::result::Result<Self, String> {
        let items = v.as_list().map_err(|e| format!("{SHAPE} ({e})"))?;
        Self::from_fields(&items)
    }
}

/// Type descriptor with text, generic-conversion and footprint hooks.
pub fn descriptor() -> NativeTypeDescriptor {
    NativeTypeDescriptor::for_type::<NativePoint>(TYPE_NAME)
        .with_to_text(|p: &NativePoint| Ok(p.to_text()))
        .with_from_generic(NativePoint::from_generic)
        .with_footprint(|p: &NativePoint| std::mem::size_of::<NativePoint>() + p.name.len())
}

fn set_with<T>(
    parse: impl Fn(&Value) -> Result<T> + 'static,
    assign: impl Fn(&mut NativePoint, T) + 'static,
) -> impl Fn(&mut NativePoint, &Value) -> std::result::Result<(), String> {
    move |p, v| {
        let t = parse(v).map_err(|e| e.to_string())?;
        assign(p, t);
        Ok(())
    }
}

/// Register the type and the `CppVooPoint` class.
pub fn register(reg: &mut Registry) -> Result<()> {
    let d = reg.register_native_type(descriptor())?;
    reg.register_native_class(spec(CLASS_NAME, d))
}

/// Class spec for `NativePoint` under `class_name`.
pub fn spec(class_name: &str, d: Rc<NativeTypeDescriptor>) -> NativeClassSpec<NativePoint> {
    NativeClassSpec::new(class_name, d, NativePoint::from_fields, NativePoint::default)
        .field(
            "x",
            |p: &NativePoint| Value::double(p.x),
            set_with(Value::as_f64, |p, v| p.x = v),
        )
        .field(
            "y",
            |p: &NativePoint| Value::double(p.y),
            set_with(Value::as_f64, |p, v| p.y = v),
        )
        .field(
            "name",
            |p: &NativePoint| Value::text(p.name.as_str()),
            set_with(|v| v.to_text().map(str::to_string), |p, v| p.name = v),
        )
        .field(
            "id",
            |p: &NativePoint| Value::int(p.id),
            set_with(Value::as_i64, |p, v| p.id = v),
        )
        .field(
            "active",
            |p: &NativePoint| Value::boolean(p.active),
            set_with(Value::as_bool, |p, v| p.active = v),
        )
        .method("distance", |p: &NativePoint, _| Ok(Value::double(p.distance())))
}
