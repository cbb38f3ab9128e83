//! Canonical text form: list quoting, list splitting and number formatting.
//!
//! Elements are emitted bare when possible, brace-quoted when they contain
//! whitespace, braces, quotes or backslashes (or are empty), and
//! backslash-escaped only when brace quoting cannot represent them
//! (unbalanced braces or a trailing backslash).

use crate::error::{Error, Result};

/// Shortest text that parses back to the same `f64`; integral values keep a
/// trailing `.0` so doubles stay distinguishable from ints.
pub fn format_double(d: f64) -> String {
    if d.is_nan() {
        return "NaN".to_string();
    }
    if d.is_infinite() {
        return if d > 0.0 { "Inf".into() } else { "-Inf".into() };
    }
    format!("{d:?}")
}

pub fn format_bool(b: bool) -> &'static str {
    if b {
        "1"
    } else {
        "0"
    }
}

fn is_space(c: char) -> bool {
    c.is_whitespace()
}

/// Whether `s` can sit inside `{...}` and come back out unchanged.
fn brace_safe(s: &str) -> bool {
    let mut depth: i64 = 0;
    let mut chars = s.chars();
    while let Some(c) = chars.next() {
        match c {
            '\\' => {
                if chars.next().is_none() {
                    return false;
                }
            }
            '{' => depth += 1,
            '}' => {
                depth -= 1;
                if depth < 0 {
                    return false;
                }
            }
            _ => {}
        }
    }
    depth == 0
}

/// Append `elem` to `out` in list-element form.
pub fn push_element(out: &mut String, elem: &str) {
    if elem.is_empty() {
        out.push_str("{}");
        return;
    }
    let needs_quote = elem
        .chars()
        .any(|c| is_space(c) || matches!(c, '{' | '}' | '"' | '\\' | ';'));
    if !needs_quote {
        out.push_str(elem);
    } else if brace_safe(elem) {
        out.push('{');
        out.push_str(elem);
        out.push('}');
    } else {
        for c in elem.chars() {
            match c {
                '\n' => out.push_str("\\n"),
                '\t' => out.push_str("\\t"),
                '\r' => out.push_str("\\r"),
                c if is_space(c) || matches!(c, '{' | '}' | '"' | '\\' | ';' | '[' | ']' | '$') => {
                    out.push('\\');
                    out.push(c);
                }
                c => out.push(c),
            }
        }
    }
}

/// Join already-rendered element texts into one list text.
pub fn join_elements<'a>(elems: impl IntoIterator<Item = &'a str>) -> String {
    let mut out = String::new();
    for (i, e) in elems.into_iter().enumerate() {
        if i > 0 {
            out.push(' ');
        }
        push_element(&mut out, e);
    }
    out
}

fn backslash_char(c: char) -> char {
    match c {
        'n' => '\n',
        't' => '\t',
        'r' => '\r',
        other => other,
    }
}

/// Split `s` into list elements.
pub fn split_list(s: &str) -> Result<Vec<String>> {
    let chars: Vec<(usize, char)> = s.char_indices().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let n = chars.len();
    let err = |pos: usize, msg: &str| Error::ListParse {
        pos,
        msg: msg.to_string(),
    };
    while i < n {
        while i < n && is_space(chars[i].1) {
            i += 1;
        }
        if i >= n {
            break;
        }
        let start = chars[i].0;
        match chars[i].1 {
            '{' => {
                let mut depth = 1;
                let mut j = i + 1;
                let mut elem = String::new();
                while j < n {
                    let c = chars[j].1;
                    match c {
                        '\\' if j + 1 < n => {
                            elem.push(c);
                            elem.push(chars[j + 1].1);
                            j += 2;
                            continue;
                        }
                        '{' => depth += 1,
                        '}' => {
                            depth -= 1;
                            if depth == 0 {
                                break;
                            }
                        }
                        _ => {}
                    }
                    elem.push(c);
                    j += 1;
                }
                if depth != 0 {
                    return Err(err(start, "unmatched open brace in list"));
                }
                j += 1;
                if j < n && !is_space(chars[j].1) {
                    return Err(err(
                        chars[j].0,
                        "list element in braces followed by non-space character",
                    ));
                }
                out.push(elem);
                i = j;
            }
            '"' => {
                let mut j = i + 1;
                let mut elem = String::new();
                let mut closed = false;
                while j < n {
                    match chars[j].1 {
                        '\\' if j + 1 < n => {
                            elem.push(backslash_char(chars[j + 1].1));
                            j += 2;
                        }
                        '"' => {
                            closed = true;
                            break;
                        }
                        c => {
                            elem.push(c);
                            j += 1;
                        }
                    }
                }
                if !closed {
                    return Err(err(start, "unmatched open quote in list"));
                }
                j += 1;
                if j < n && !is_space(chars[j].1) {
                    return Err(err(
                        chars[j].0,
                        "list element in quotes followed by non-space character",
                    ));
                }
                out.push(elem);
                i = j;
            }
            _ => {
                let mut elem = String::new();
                let mut j = i;
                while j < n && !is_space(chars[j].1) {
                    match chars[j].1 {
                        '\\' if j + 1 < n => {
                            elem.push(backslash_char(chars[j + 1].1));
                            j += 2;
                        }
                        '\\' => {
                            elem.push('\\');
                            j += 1;
                        }
                        '}' => return Err(err(chars[j].0, "unmatched close brace in list")),
                        c => {
                            elem.push(c);
                            j += 1;
                        }
                    }
                }
                out.push(elem);
                i = j;
            }
        }
    }
    Ok(out)
}
