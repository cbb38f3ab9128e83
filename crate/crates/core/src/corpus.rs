//! Example classes with host-bound method bodies.

use crate::error::Result;
use crate::runtime::{Call, Registry};
use crate::value::Value;

pub const PERSON: &str = include_str!("../corpus/person.voo");
pub const POINT: &str = include_str!("../corpus/point.voo");
pub const VOO_POINT: &str = include_str!("../corpus/voo_point.voo");
pub const SHAPES: &str = include_str!("../corpus/shapes.voo");

/// Every corpus source, by file stem.
pub const SOURCES: [(&str, &str); 4] = [
    ("person", PERSON),
    ("point", POINT),
    ("voo_point", VOO_POINT),
    ("shapes", SHAPES),
];

fn distance(call: &mut Call<'_>) -> Result<Value> {
    let dx = call.field("x")?.as_f64()?;
    let dy = call.field("y")?.as_f64()?;
    Ok(Value::double((dx * dx + dy * dy).sqrt()))
}

/// `Person` and `Employee`.
pub fn load_person(reg: &mut Registry) -> Result<()> {
    reg.declare(PERSON)?;
    reg.bind_method("Person", "greet", |call| {
        let name = call.field("name")?;
        Ok(Value::text(format!("Hello, I'm {}", name.to_text()?)))
    })?;
    reg.bind_method("Employee", "payout", |call| {
        let salary = call.field("salary")?.as_f64()?;
        let bonus = call.field("bonus")?.as_f64()?;
        Ok(Value::double(salary + bonus))
    })?;
    reg.bind_method("Employee", "promote", |call| {
        let title = call.arg(0)?.clone();
        call.invoke("Employee::set.title", &[Value::text("this"), title])
    })?;
    reg.bind_method("Employee", "raise", |call| {
        let salary = call.var("salary")?.as_f64()?;
        let pct = call.arg(0)?.as_f64()?;
        call.set_var("salary", Value::double(salary * (1.0 + pct / 100.0)));
        Ok(Value::empty())
    })?;
    reg.bind_method("Employee", "hire", |call| {
        let n = call.invoke("Employee::class.get.headcount", &[])?.as_i64()?;
        call.invoke("Employee::class.set.headcount", &[Value::int(n + 1)])?;
        Ok(Value::int(n + 1))
    })?;
    reg.bind_method("Employee", "total", |call| {
        let this = call.this()?;
        call.invoke("Employee::my.payout", &[this])
    })?;
    Ok(())
}

/// `Point` with a static counter.
pub fn load_point(reg: &mut Registry) -> Result<()> {
    reg.declare(POINT)?;
    reg.bind_method("Point", "distance", distance)
}

/// The five-field benchmark point.
pub fn load_voo_point(reg: &mut Registry) -> Result<()> {
    reg.declare(VOO_POINT)?;
    reg.bind_method("VooPoint", "distance", distance)
}

/// `Shape`, `Circle` and `ColoredCircle`.
// the circle body uses the literal 3.14159 from the class source
#[allow(clippy::approx_constant)]
pub fn load_shapes(reg: &mut Registry) -> Result<()> {
    reg.declare(SHAPES)?;
    reg.bind_method("Shape", "area", |_| Ok(Value::double(0.0)))?;
    reg.bind_method("Circle", "area", |call| {
        let r = call.field("radius")?.as_f64()?;
        Ok(Value::double(3.14159 * r.powi(2)))
    })?;
    reg.bind_method("ColoredCircle", "area", |call| {
        let this = call.this()?;
        let base = call.invoke("Circle::base.area", &[this])?.as_f64()?;
        Ok(Value::double(base * 1.1))
    })?;
    Ok(())
}

pub fn load_all(reg: &mut Registry) -> Result<()> {
    load_person(reg)?;
    load_point(reg)?;
    load_voo_point(reg)?;
    load_shapes(reg)
}
