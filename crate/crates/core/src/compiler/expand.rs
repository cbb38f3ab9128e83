//! Renders a class as the plain script it stands for: a namespace holding
//! the index variables, the default object and one proc per generated
//! command.

use std::fmt::Write;

use crate::dsl::{ClassDecl, MethodDecl, Visibility};
use crate::error::Result;
use crate::runtime::{Convention, Registry};
use crate::value::text::join_elements;

use super::{CompiledClass, MethodBinding};

const IND: &str = "    ";

/// Expand `d` against the classes already compiled in `registry` (needed to
/// resolve a parent). The registry is not modified.
pub fn expand(d: &ClassDecl, registry: &Registry) -> Result<String> {
    let cls = CompiledClass::build(d, registry)?;
    let mut out = String::new();
    emit(&cls, &mut out).expect("writing to a String cannot fail");
    Ok(out)
}

fn dedent(body: &str, indent: &str) -> String {
    let lines: Vec<&str> = body.trim_end().trim_start_matches('\n').lines().collect();
    let margin = lines
        .iter()
        .filter(|l| !l.trim().is_empty())
        .map(|l| l.len() - l.trim_start().len())
        .min()
        .unwrap_or(0);
    let mut s = String::new();
    for l in lines {
        if l.trim().is_empty() {
            s.push('\n');
        } else {
            s.push_str(indent);
            s.push_str(l.get(margin..).unwrap_or(l.trim_start()).trim_end());
            s.push('\n');
        }
    }
    s
}

fn proc_block(out: &mut String, name: &str, params: &str, preamble: &[String], body: &str) -> std::fmt::Result {
    writeln!(out, "{IND}proc {name} {{{params}}} {{")?;
    for p in preamble {
        writeln!(out, "{IND}{IND}{p}")?;
    }
    out.push_str(&dedent(body, &format!("{IND}{IND}")));
    writeln!(out, "{IND}}}")
}

fn method_params(decl: &MethodDecl) -> String {
    let mut ps: Vec<&str> = match Convention::of(&decl.modifiers) {
        Convention::Static => vec![],
        Convention::Value => vec!["this"],
        Convention::ByName => vec!["thisVar"],
    };
    ps.extend(decl.params.iter().map(String::as_str));
    ps.join(" ")
}

fn method_preamble(cls: &CompiledClass, decl: &MethodDecl) -> Vec<String> {
    let mut pre = Vec::new();
    if Convention::of(&decl.modifiers) == Convention::ByName {
        pre.push("upvar $thisVar this".to_string());
    }
    for f in decl.modifiers.update.iter().flatten() {
        if let Some(i) = cls.slot_of(f) {
            pre.push(format!("set {f} [lindex $this {i}]; lset this {i} {{}}"));
        }
    }
    pre
}

fn emit_method(cls: &CompiledClass, b: &MethodBinding, out: &mut String) -> std::fmt::Result {
    let params = method_params(&b.decl);
    if b.imported {
        writeln!(out, "{IND}# imported from {}", b.owner)?;
        return writeln!(
            out,
            "{IND}proc {} {{args}} {{ tailcall ::{}::{} {{*}}$args }}",
            b.key, b.owner, b.key
        );
    }
    let pre = method_preamble(cls, &b.decl);
    let body = match &b.decl.modifiers.update {
        Some(fields) => {
            let restore: Vec<String> = fields
                .iter()
                .filter_map(|f| cls.slot_of(f).map(|i| format!("lset this {i} ${f}")))
                .collect();
            format!(
                "try {{\n{}}} finally {{\n{IND}{}\n}}",
                dedent(&b.decl.body_text, IND),
                restore.join(&format!("\n{IND}"))
            )
        }
        None => b.decl.body_text.clone(),
    };
    if !b.dispatcher {
        return proc_block(out, &b.key, &params, &pre, &body);
    }
    let base = b.base_key();
    writeln!(out, "{IND}# {base} holds the original body for direct parent calls")?;
    proc_block(out, &base, &params, &pre, &body)?;
    writeln!(out)?;
    writeln!(out, "{IND}# {} is a dispatcher", b.key)?;
    let by_name = Convention::of(&b.decl.modifiers) == Convention::ByName;
    let pre: Vec<String> = if by_name {
        vec!["upvar $thisVar this".to_string()]
    } else {
        Vec::new()
    };
    let recv = "$this";
    let call_args = params
        .split_whitespace()
        .map(|p| if p == "thisVar" { "this".to_string() } else { format!("${p}") })
        .collect::<Vec<_>>()
        .join(" ");
    let lines = [
        format!("set __voo_cls [lindex {recv} 0]"),
        "if {$__voo_cls ne [namespace current] && \\".to_string(),
        format!("{IND}[info commands ${{__voo_cls}}::{}] ne {{}}}} {{", b.key),
        format!("{IND}return [${{__voo_cls}}::{} {call_args}]", b.key),
        "}".to_string(),
        format!("return [{base} {call_args}]"),
    ];
    proc_block(out, &b.key, &params, &pre, &lines.join("\n"))
}

fn emit(cls: &CompiledClass, out: &mut String) -> std::fmt::Result {
    let name = cls.name();
    writeln!(out, "namespace eval {name} {{")?;
    if cls.is_virtual() {
        writeln!(out, "{IND}# Index 0 is permanently reserved for the class namespace tag.")?;
    }
    for f in cls.fields() {
        if f.declared_in != name {
            writeln!(out, "{IND}variable {} {}          ;# same index as {}::{}", f.name, f.index, f.declared_in, f.name)?;
        } else {
            writeln!(out, "{IND}variable {} {}", f.name, f.index)?;
        }
    }
    let defaults: Vec<String> = cls
        .defaults()
        .as_list()
        .expect("default object is a list")
        .iter()
        .map(|v| v.display_text())
        .collect();
    writeln!(out, "{IND}variable __defaultObj [list {}]", join_elements(defaults.iter().map(String::as_str)))?;
    writeln!(out, "{IND}variable __fields [list {}]", join_elements(cls.field_order()))?;
    if cls.is_virtual() {
        writeln!(out, "{IND}variable __voo_is_virtual_class 1")?;
    }
    for f in cls.decl().static_fields() {
        writeln!(out, "{IND}variable {} {}", f.name, join_elements([f.default_value.display_text().as_str()]))?;
    }
    writeln!(out)?;

    let field_args: Vec<String> = cls.fields().iter().map(|f| format!("${}", f.name)).collect();
    let tag = cls.tag().map(|t| format!("{} ", t.display_text())).unwrap_or_default();
    match cls.constructor() {
        Some(c) => proc_block(out, "new", &c.params.join(" "), &[], &c.body_text)?,
        None => writeln!(
            out,
            "{IND}proc new {{{}}} {{ return [list {tag}{}] }}",
            cls.field_order().join(" "),
            field_args.join(" ")
        )?,
    }
    proc_block(
        out,
        "new()",
        "",
        &[],
        "variable __defaultObj\nreturn $__defaultObj",
    )?;
    proc_block(out, "new.args", "args", &[], NEW_ARGS)?;

    for f in cls.fields() {
        let p = match f.visibility {
            Visibility::Public => "",
            Visibility::Private => "my.",
        };
        let n = &f.name;
        writeln!(out)?;
        writeln!(
            out,
            "{IND}proc {p}get.{n} {{this}} {{ variable {n}; return [lindex $this ${n}] }}"
        )?;
        proc_block(
            out,
            &format!("{p}set.{n}"),
            "thisVar value",
            &[],
            &format!("variable {n}\nupvar $thisVar this\nlset this ${n} $value"),
        )?;
        proc_block(
            out,
            &format!("{p}update.{n}"),
            "thisVar tempVar body",
            &[],
            &format!(
                "variable {n}\nupvar $thisVar this\nupvar $tempVar temp\ntry {{\n    set temp [lindex $this ${n}]\n    lset this ${n} {{}}\n    uplevel $body\n}} finally {{\n    lset this ${n} $temp\n}}"
            ),
        )?;
    }

    for s in cls.decl().static_fields() {
        let p = match s.visibility {
            Visibility::Public => "",
            Visibility::Private => "my.",
        };
        let n = &s.name;
        writeln!(out)?;
        writeln!(out, "{IND}proc {p}class.get.{n} {{}} {{ variable {n}; return ${n} }}")?;
        writeln!(out, "{IND}proc {p}class.set.{n} {{value}} {{ variable {n}; set {n} $value }}")?;
    }

    for b in cls.methods().values() {
        writeln!(out)?;
        emit_method(cls, b, out)?;
    }
    writeln!(out, "}}")
}

const NEW_ARGS: &str = r#"variable __defaultObj
set obj $__defaultObj
if {[catch {dict size $args}]} {
    error "Constructor argument must be a list of '-<field> <value>' pairs"
}
dict for {key value} $args {
    if {[string index $key 0] ne "-"} {
        error "Constructor argument keys must start with '-', got '$key'"
    }
    set field [string range $key 1 end]
    set setter set.$field
    if {[info commands $setter] ne ""} {
        $setter obj $value
    } else {
        set setter my.set.$field
        if {[info commands $setter] ne ""} {
            $setter obj $value
        } else {
            error "Unknown field option: $field"
        }
    }
}
return $obj"#;
