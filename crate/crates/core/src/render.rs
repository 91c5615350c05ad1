//! Canonical text for coefficient-weighted sums.

use crate::scalar::ParamScalar;

/// One `coefficient·body` term. An empty body stands for the unit.
pub fn term(c: &ParamScalar, body: &str) -> String {
    if body.is_empty() || body == "1" {
        return if c.len() > 1 { format!("({c})") } else { c.to_string() };
    }
    if c.is_one() {
        return body.to_string();
    }
    if c.len() == 1 {
        let s = c.to_string();
        if s == "-1" {
            return format!("-{body}");
        }
        return format!("{s}*{body}");
    }
    format!("({c})*{body}")
}

/// Join terms with ` + ` / ` - `; the empty sum is `0`.
pub fn join_terms(items: impl IntoIterator<Item = (ParamScalar, String)>) -> String {
    let mut out = String::new();
    for (c, body) in items {
        if c.is_zero() {
            continue;
        }
        let t = term(&c, &body);
        if out.is_empty() {
            out = t;
        } else if let Some(rest) = t.strip_prefix('-') {
            out.push_str(" - ");
            out.push_str(rest);
        } else {
            out.push_str(" + ");
            out.push_str(&t);
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}
