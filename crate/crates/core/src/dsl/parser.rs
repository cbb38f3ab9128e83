use std::collections::HashSet;

use super::lexer::{tokenize, Command, Word, WordKind};
use super::*;
use crate::error::{Error, Result};
use crate::value::text::split_list;
use crate::value::{parse_bool, Value};

fn perr(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

/// Parse every `voo::class` declaration in `source`. Other top-level
/// commands (usage lines in listings) are skipped.
pub fn parse_classes(source: &str) -> Result<Vec<ClassDecl>> {
    tokenize(source, 1)?
        .iter()
        .filter(|c| is_class_command(c))
        .map(parse_class_command)
        .collect()
}

/// Parse a source holding exactly one class declaration.
pub fn parse_class(source: &str) -> Result<ClassDecl> {
    let mut all = parse_classes(source)?;
    match all.len() {
        1 => Ok(all.remove(0)),
        n => Err(perr(1, format!("expected one class declaration, found {n}"))),
    }
}

fn is_class_command(cmd: &Command) -> bool {
    let head = &cmd.words[0];
    head.kind == WordKind::Bare && (head.text == "voo::class" || head.text == "::voo::class")
}

fn parse_class_command(cmd: &Command) -> Result<ClassDecl> {
    let w = &cmd.words;
    if w.len() < 3 {
        return Err(perr(cmd.line, "usage: voo::class Name ?-virtual? ?-extends Parent? {body}"));
    }
    let name = normalize_class_name(&w[1].text);
    if name.is_empty() {
        return Err(perr(w[1].line, "empty class name"));
    }
    let mut decl = ClassDecl {
        name,
        parent: None,
        is_virtual: false,
        fields: Vec::new(),
        methods: Vec::new(),
        custom_constructor: None,
        imports: Vec::new(),
    };
    let body = w.last().expect("len checked");
    let mut i = 2;
    while i < w.len() - 1 {
        let opt = &w[i];
        if opt.is_bare("-virtual") {
            decl.is_virtual = true;
        } else if opt.is_bare("-extends") {
            let parent = w
                .get(i + 1)
                .filter(|_| i + 1 < w.len() - 1)
                .ok_or_else(|| perr(opt.line, "-extends requires a parent class name"))?;
            decl.parent = Some(normalize_class_name(&parent.text));
            i += 1;
        } else {
            return Err(perr(opt.line, format!("unknown class option \"{}\"", opt.text)));
        }
        i += 1;
    }
    if body.kind != WordKind::Braced {
        return Err(perr(body.line, "class body must be a braced block"));
    }
    let mut seen_fields = HashSet::new();
    let mut seen_methods = HashSet::new();
    for c in tokenize(&body.text, body.content_line)? {
        parse_body_command(&mut decl, &c, None, &mut seen_fields, &mut seen_methods)?;
    }
    Ok(decl)
}

pub(crate) fn normalize_class_name(s: &str) -> String {
    s.trim_start_matches("::").to_string()
}

fn parse_body_command(
    decl: &mut ClassDecl,
    cmd: &Command,
    block: Option<Visibility>,
    seen_fields: &mut HashSet<String>,
    seen_methods: &mut HashSet<(String, Visibility)>,
) -> Result<()> {
    let head = &cmd.words[0];
    let vis = block.unwrap_or(Visibility::Public);
    match head.text.as_str() {
        "public" | "private" if head.kind == WordKind::Bare => {
            if block.is_some() {
                return Err(perr(cmd.line, format!("{} block nested inside another block", head.text)));
            }
            let inner_vis = if head.text == "public" {
                Visibility::Public
            } else {
                Visibility::Private
            };
            let content = match cmd.words.as_slice() {
                [_, b] if b.kind == WordKind::Braced => b,
                _ => return Err(perr(cmd.line, format!("usage: {} {{declarations}}", head.text))),
            };
            for c in tokenize(&content.text, content.content_line)? {
                parse_body_command(decl, &c, Some(inner_vis), seen_fields, seen_methods)?;
            }
        }
        "method" => {
            let m = parse_method(cmd, vis)?;
            if !seen_methods.insert((m.name.clone(), vis)) {
                return Err(perr(cmd.line, format!("duplicate method \"{}\"", m.name)));
            }
            decl.methods.push(m);
        }
        "constructor" => {
            if decl.custom_constructor.is_some() {
                return Err(perr(cmd.line, "duplicate constructor"));
            }
            match cmd.words.as_slice() {
                [_, params, body] => {
                    decl.custom_constructor = Some(ConstructorDecl {
                        params: param_names(params)?,
                        body_text: body.text.clone(),
                    });
                }
                _ => return Err(perr(cmd.line, "usage: constructor {params} {body}")),
            }
        }
        "importMethods" => match cmd.words.as_slice() {
            [_, names] => {
                let list = split_list(&names.text).map_err(|e| perr(names.line, e.to_string()))?;
                decl.imports.extend(list);
            }
            _ => return Err(perr(cmd.line, "usage: importMethods {name ...}")),
        },
        tag if tag.ends_with("_t") && head.kind == WordKind::Bare => {
            let field = parse_field(cmd, vis)?;
            if !seen_fields.insert(field.name.clone()) {
                return Err(perr(cmd.line, format!("duplicate field \"{}\"", field.name)));
            }
            decl.fields.push(field);
        }
        other => return Err(perr(cmd.line, format!("unknown declaration \"{other}\""))),
    }
    Ok(())
}

fn parse_field(cmd: &Command, vis: Visibility) -> Result<FieldDecl> {
    let w = &cmd.words;
    let type_tag: TypeTag = w[0]
        .text
        .parse()
        .map_err(|_| perr(cmd.line, format!("unknown type tag \"{}\"", w[0].text)))?;
    let mut i = 1;
    let is_static = w.get(1).is_some_and(|x| x.is_bare("-static"));
    if is_static {
        i += 1;
    }
    let name = w
        .get(i)
        .ok_or_else(|| perr(cmd.line, "field declaration missing a name"))?;
    if name.is_option() {
        return Err(perr(cmd.line, format!("unknown field modifier \"{}\"", name.text)));
    }
    let default = w.get(i + 1).ok_or_else(|| {
        perr(cmd.line, format!("field \"{}\" missing default value", name.text))
    })?;
    if w.len() > i + 2 {
        return Err(perr(
            cmd.line,
            format!("unexpected \"{}\" after default of field \"{}\"", w[i + 2].text, name.text),
        ));
    }
    Ok(FieldDecl {
        type_tag,
        name: name.text.clone(),
        default_value: default_value(type_tag, default)?,
        is_static,
        visibility: vis,
        line: cmd.line,
    })
}

/// Build a default from its literal. Type tags steer the representation but
/// are never enforced: a literal that does not fit stays text.
fn default_value(tag: TypeTag, word: &Word) -> Result<Value> {
    if word.kind == WordKind::Bracketed {
        return bracketed_default(word);
    }
    let text = word.text.as_str();
    Ok(match tag {
        TypeTag::Double => match text.trim().parse::<f64>() {
            Ok(d) => Value::double(d),
            Err(_) => Value::text(text),
        },
        TypeTag::Int => match text.trim().parse::<i64>() {
            Ok(i) => Value::int(i),
            Err(_) => Value::text(text),
        },
        TypeTag::Bool => match parse_bool(text) {
            Some(b) => Value::boolean(b),
            None => Value::text(text),
        },
        TypeTag::String | TypeTag::Obj => Value::text(text),
        TypeTag::List => Value::parse_list(text).map_err(|e| perr(word.line, e.to_string()))?,
        TypeTag::Dict => {
            let mut v = Value::dict(Vec::<(String, Value)>::new());
            let items = split_list(text).map_err(|e| perr(word.line, e.to_string()))?;
            if items.len() % 2 != 0 {
                return Err(perr(word.line, "dict default needs key/value pairs"));
            }
            for kv in items.chunks(2) {
                v.dict_set(&kv[0], Value::text(kv[1].as_str()))?;
            }
            v
        }
    })
}

/// `[list ...]` and `[dict create ...]` are the only substitutions accepted
/// in defaults; their arguments are taken literally.
fn bracketed_default(word: &Word) -> Result<Value> {
    let inner = &word.text[1..word.text.len() - 1];
    let cmds = tokenize(inner, word.line)?;
    let words: Vec<&Word> = cmds.iter().flat_map(|c| c.words.iter()).collect();
    let heads: Vec<&str> = words.iter().take(2).map(|w| w.text.as_str()).collect();
    match heads.as_slice() {
        ["list", ..] => Ok(Value::list(
            words[1..].iter().map(|w| Value::text(w.text.as_str())).collect(),
        )),
        ["dict", "create"] => {
            let rest = &words[2..];
            if !rest.len().is_multiple_of(2) {
                return Err(perr(word.line, "dict create needs key/value pairs"));
            }
            Ok(Value::dict(
                rest.chunks(2)
                    .map(|kv| (kv[0].text.clone(), Value::text(kv[1].text.as_str()))),
            ))
        }
        _ => Err(perr(
            word.line,
            format!("unsupported default expression {}", word.text),
        )),
    }
}

fn param_names(word: &Word) -> Result<Vec<String>> {
    let items = split_list(&word.text).map_err(|e| perr(word.line, e.to_string()))?;
    items
        .iter()
        .map(|p| {
            // `{name default}` parameters keep only the name
            let parts = split_list(p).map_err(|e| perr(word.line, e.to_string()))?;
            parts
                .into_iter()
                .next()
                .ok_or_else(|| perr(word.line, "empty parameter name"))
        })
        .collect()
}

fn parse_method(cmd: &Command, vis: Visibility) -> Result<MethodDecl> {
    let w = &cmd.words;
    if w.len() < 3 {
        return Err(perr(cmd.line, "usage: method name ?modifiers? {params} {body}"));
    }
    let name = &w[1];
    if name.is_option() {
        return Err(perr(cmd.line, "method name missing"));
    }
    let body = w.last().expect("len checked");
    let mut modifiers = Modifiers::default();
    let mut params = None;
    let mut i = 2;
    let last = w.len() - 1;
    while i < last {
        let word = &w[i];
        if word.is_option() {
            match word.text.as_str() {
                "-static" => modifiers.is_static = true,
                "-upvar" => modifiers.upvar = true,
                "-override" => modifiers.is_override = true,
                "-virtual" => modifiers.is_virtual = true,
                "-update" => {
                    if i + 1 >= last {
                        return Err(perr(word.line, "-update requires a field list"));
                    }
                    let fields =
                        split_list(&w[i + 1].text).map_err(|e| perr(word.line, e.to_string()))?;
                    if fields.is_empty() {
                        return Err(perr(word.line, "-update requires a non-empty field list"));
                    }
                    modifiers.update = Some(fields);
                    i += 1;
                }
                other => {
                    return Err(perr(word.line, format!("unknown method modifier \"{other}\"")))
                }
            }
        } else if params.is_none() {
            params = Some(param_names(word)?);
        } else {
            return Err(perr(word.line, format!("unexpected word \"{}\" in method", word.text)));
        }
        i += 1;
    }
    let params = params.ok_or_else(|| {
        perr(cmd.line, format!("method \"{}\" is missing its parameter list", name.text))
    })?;
    if modifiers.is_virtual && modifiers.is_static {
        return Err(perr(cmd.line, "-virtual and -static are mutually exclusive"));
    }
    if modifiers.is_virtual && modifiers.is_override {
        return Err(perr(cmd.line, "-virtual and -override are mutually exclusive"));
    }
    if modifiers.is_static && (modifiers.upvar || modifiers.update.is_some()) {
        return Err(perr(cmd.line, "-static methods have no object to pass by reference"));
    }
    Ok(MethodDecl {
        name: name.text.clone(),
        params,
        modifiers,
        body_text: body.text.clone(),
        visibility: vis,
        line: cmd.line,
    })
}
