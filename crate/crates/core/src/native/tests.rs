use super::*;
use crate::corpus;

fn reg() -> Registry {
    let mut r = Registry::new();
    point::register(&mut r).unwrap();
    r
}

fn args() -> Vec<Value> {
    vec![1.0.into(), 2.0.into(), "test".into(), 1.into(), true.into()]
}

#[test]
fn registration_rules() {
    let mut r = reg();
    assert_eq!(
        r.register_native_type(point::descriptor()).unwrap_err(),
        Error::DuplicateNativeType("VooPoint".into())
    );
    let bare = NativeTypeDescriptor::named("Bare");
    assert!(matches!(r.register_native_type(bare), Err(Error::MissingHook { .. })));
    assert!(r.native_type("VooPoint").is_some());
}

#[test]
fn construct_and_read() {
    let r = reg();
    let mut env = Environment::new();
    let p = r.invoke("CppVooPoint::new", &mut env, &args()).unwrap();
    assert_eq!(p.kind(), crate::Kind::Native);
    assert_eq!(r.invoke("CppVooPoint::get.x", &mut env, &[p.clone()]).unwrap().as_f64().unwrap(), 1.0);
    assert_eq!(p.to_text().unwrap(), "1.0 2.0 test 1 1");
    let d = r.invoke("CppVooPoint::new()", &mut env, &[]).unwrap();
    assert_eq!(d.to_text().unwrap(), "0.0 0.0 point 0 1");
    let e = r.invoke("CppVooPoint::new", &mut env, &args()[..4]).unwrap_err();
    assert!(matches!(e, Error::Conversion { .. }));
    let e = r
        .invoke("CppVooPoint::new", &mut env, &[1.0.into(), "abc".into(), "n".into(), 1.into(), true.into()])
        .unwrap_err();
    assert!(e.to_string().starts_with("Failed to convert to \"VooPoint\""));
}

#[test]
fn conversion_from_generic() {
    let r = reg();
    let d = r.native_type("VooPoint").unwrap();
    let mut v = Value::text("1.0 2.0 test 1 1");
    value_to_native(&mut v, d).unwrap();
    assert_eq!(native_ref::<NativePoint>(&v, d).unwrap().name, "test");
    assert_eq!(v.to_text().unwrap(), "1.0 2.0 test 1 1");
    let same = v.clone();
    value_to_native(&mut v, d).unwrap();
    assert!(v.ptr_eq(&same));

    let mut short = Value::text("1.0 2.0 test 1");
    let err = value_to_native(&mut short, d).unwrap_err();
    assert!(err.to_string().contains("Expected list of 5 elements"));
    assert_eq!(short.kind(), crate::Kind::Text);
}

#[test]
fn getter_converts_generic_lists() {
    let r = reg();
    let mut env = Environment::new();
    let y = r
        .invoke("CppVooPoint::get.y", &mut env, &[Value::text("3.0 4.5 n 2 0")])
        .unwrap();
    assert_eq!(y.as_f64().unwrap(), 4.5);
}

#[test]
fn setter_duplicates_shared_instance() {
    let r = reg();
    let mut env = Environment::new();
    let p = r.invoke("CppVooPoint::new", &mut env, &args()).unwrap();
    let other = p.clone();
    env.set("p", p);
    r.invoke("CppVooPoint::set.x", &mut env, &["p".into(), 9.0.into()]).unwrap();
    assert_eq!(env.get("p").unwrap().to_text().unwrap(), "9.0 2.0 test 1 1");
    assert_eq!(other.to_text().unwrap(), "1.0 2.0 test 1 1");
    let e = r
        .invoke("CppVooPoint::set.id", &mut env, &["p".into(), "x".into()])
        .unwrap_err();
    assert!(matches!(e, Error::Conversion { .. }));
}

#[test]
fn setter_on_unshared_does_not_allocate() {
    let r = reg();
    let mut env = Environment::new();
    let p = r.invoke("CppVooPoint::new", &mut env, &args()).unwrap();
    env.set("p", p);
    let set_args = ["p".into(), 9.0.into()];
    let scope = crate::value::LedgerScope::begin();
    r.invoke("CppVooPoint::set.x", &mut env, &set_args).unwrap();
    assert_eq!(scope.delta().allocations, 0);
}

#[test]
fn named_and_update() {
    let mut r = reg();
    let mut env = Environment::new();
    let p = r
        .invoke("CppVooPoint::new.args", &mut env, &["-name".into(), "z".into(), "-id".into(), 7.into()])
        .unwrap();
    assert_eq!(p.to_text().unwrap(), "0.0 0.0 z 7 1");
    let e = r.invoke("CppVooPoint::new.args", &mut env, &["-q".into(), 1.into()]).unwrap_err();
    assert_eq!(e.to_string(), "Unknown field option: q");

    r.register_command("bump", |_, env, _| {
        let t = env.get("t")?.as_i64()?;
        env.set("t", Value::int(t + 1));
        Ok(Value::empty())
    })
    .unwrap();
    env.set("p", p);
    r.invoke("CppVooPoint::update.id", &mut env, &["p".into(), "t".into(), "bump".into()])
        .unwrap();
    assert_eq!(env.get("p").unwrap().to_text().unwrap(), "0.0 0.0 z 8 1");
}

#[test]
fn api_parity_with_declared_class() {
    let mut r = reg();
    corpus::load_voo_point(&mut r).unwrap();
    let strip = |names: Vec<String>, prefix: &str| {
        let mut v: Vec<String> = names
            .into_iter()
            .map(|n| n.strip_prefix(prefix).unwrap().to_string())
            .collect();
        v.sort();
        v
    };
    assert_eq!(
        strip(r.command_names("CppVooPoint::"), "CppVooPoint::"),
        strip(r.command_names("VooPoint::"), "VooPoint::")
    );
    let mut env = Environment::new();
    let a = r.invoke("VooPoint::new", &mut env, &args()).unwrap();
    let b = r.invoke("CppVooPoint::new", &mut env, &args()).unwrap();
    assert_eq!(a.to_text().unwrap(), b.to_text().unwrap());
    assert_eq!(
        r.invoke("VooPoint::distance", &mut env, &[a]).unwrap(),
        r.invoke("CppVooPoint::distance", &mut env, &[b]).unwrap()
    );
}

#[test]
fn text_round_trip() {
    let d = Rc::new(point::descriptor());
    let p = NativePoint {
        x: -0.5,
        y: 1e300,
        name: "two words".into(),
        id: -3,
        active: false,
    };
    let v = native_value(&d, p.clone());
    let mut back = Value::text(v.to_text().unwrap());
    value_to_native(&mut back, &d).unwrap();
    assert_eq!(native_ref::<NativePoint>(&back, &d), Some(&p));
}
