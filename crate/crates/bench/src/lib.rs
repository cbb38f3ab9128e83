//! Fixtures shared by the criterion benches.

use std::rc::Rc;

use voo_core::baseline::{ClassSpec, HandleTable};
use voo_core::harness;
use voo_core::{Environment, Registry, Value};

pub use voo_core::harness::Framework;

/// Registry, environment and baseline table ready for the point benches.
pub struct Fixture {
    pub registry: Registry,
    pub env: Environment,
    pub table: HandleTable,
    pub spec: Rc<ClassSpec>,
    pub args: Vec<Value>,
}

impl Fixture {
    pub fn new() -> Self {
        let registry = harness::bench_registry().expect("bench classes load");
        let spec = Rc::new(ClassSpec::from_class(
            registry.class("VooPoint").expect("VooPoint compiled"),
        ));
        Fixture {
            registry,
            env: Environment::new(),
            table: HandleTable::new(),
            spec,
            args: harness::explicit_args(),
        }
    }

    /// Create one point under `fw`. Baseline objects stay in the table.
    pub fn create(&mut self, fw: Framework) -> Value {
        match fw {
            Framework::Baseline => self.table.handle_create(&self.spec, &self.args).unwrap(),
            Framework::Voo => self.registry.invoke("VooPoint::new", &mut self.env, &self.args).unwrap(),
            Framework::Native => self
                .registry
                .invoke("CppVooPoint::new", &mut self.env, &self.args)
                .unwrap(),
        }
    }
}

impl Default for Fixture {
    fn default() -> Self {
        Self::new()
    }
}

/// Declaration source for a five-field class named `name`.
pub fn point_source(name: &str) -> String {
    voo_core::corpus::VOO_POINT.replacen("VooPoint", name, 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixture_creates_all_frameworks() {
        let mut f = Fixture::new();
        for fw in Framework::ALL {
            let v = f.create(fw);
            assert!(!v.display_text().is_empty());
        }
        assert_eq!(f.table.live_count(), 1);
        assert!(point_source("Q").contains("voo::class Q"));
    }
}
