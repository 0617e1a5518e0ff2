//! Parser for the sectioned `key = value` documents used for atomic data and
//! run configuration (a TOML subset: `[section]` headers, `#` comments,
//! numbers, booleans, double-quoted strings and single-line arrays).
//!
//! Every entry remembers its line so that schema errors can point at it.

use std::collections::BTreeSet;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Number(f64),
    Bool(bool),
    Str(String),
    Array(Vec<Value>),
}

impl Value {
    fn kind(&self) -> &'static str {
        match self {
            Value::Number(_) => "number",
            Value::Bool(_) => "boolean",
            Value::Str(_) => "string",
            Value::Array(_) => "array",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Entry {
    pub key: String,
    pub value: Value,
    pub line: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Section {
    /// Empty for the entries before the first header.
    pub name: String,
    pub line: usize,
    pub entries: Vec<Entry>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Document {
    pub origin: String,
    pub sections: Vec<Section>,
}

impl Document {
    pub fn parse(text: &str, origin: &str) -> Result<Self> {
        let err = |line: usize, message: String| Error::Schema {
            origin: origin.to_string(),
            line,
            message,
        };
        let mut sections = vec![Section {
            name: String::new(),
            line: 0,
            entries: Vec::new(),
        }];
        let mut seen_sections = BTreeSet::new();

        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = strip_comment(raw).trim();
            if content.is_empty() {
                continue;
            }
            if let Some(rest) = content.strip_prefix('[') {
                let name = rest
                    .strip_suffix(']')
                    .ok_or_else(|| err(line, "unterminated section header".into()))?
                    .trim();
                if name.is_empty() || !name.chars().all(is_key_char) {
                    return Err(err(line, format!("invalid section name `{name}`")));
                }
                if !seen_sections.insert(name.to_string()) {
                    return Err(err(line, format!("duplicate section `[{name}]`")));
                }
                sections.push(Section {
                    name: name.to_string(),
                    line,
                    entries: Vec::new(),
                });
                continue;
            }
            let (key, value) = content
                .split_once('=')
                .ok_or_else(|| err(line, format!("expected `key = value`, found `{content}`")))?;
            let key = key.trim();
            if key.is_empty() || !key.chars().all(is_key_char) {
                return Err(err(line, format!("invalid key `{key}`")));
            }
            let value = parse_value(value.trim()).map_err(|m| err(line, m))?;
            let section = sections.last_mut().expect("root section always present");
            if section.entries.iter().any(|e| e.key == key) {
                return Err(err(line, format!("duplicate key `{key}`")));
            }
            section.entries.push(Entry {
                key: key.to_string(),
                value,
                line,
            });
        }
        Ok(Self {
            origin: origin.to_string(),
            sections,
        })
    }

    pub fn root(&self) -> &Section {
        &self.sections[0]
    }

    pub fn section(&self, name: &str) -> Option<&Section> {
        self.sections.iter().find(|s| s.name == name)
    }

    /// Named sections in document order.
    pub fn named_sections(&self) -> impl Iterator<Item = &Section> {
        self.sections.iter().skip(1)
    }

    pub fn reader<'a>(&'a self, section: &'a Section) -> SectionReader<'a> {
        SectionReader {
            origin: &self.origin,
            section,
            used: BTreeSet::new(),
        }
    }
}

fn is_key_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '-' || c == '.'
}

fn strip_comment(line: &str) -> &str {
    let mut in_string = false;
    let mut escaped = false;
    for (i, c) in line.char_indices() {
        match c {
            '\\' if in_string => escaped = !escaped,
            '"' if !escaped => in_string = !in_string,
            '#' if !in_string => return &line[..i],
            _ => escaped = false,
        }
        if c != '\\' {
            escaped = false;
        }
    }
    line
}

fn parse_value(text: &str) -> std::result::Result<Value, String> {
    if text.is_empty() {
        return Err("missing value".into());
    }
    if let Some(inner) = text.strip_prefix('[') {
        let inner = inner
            .strip_suffix(']')
            .ok_or_else(|| "unterminated array".to_string())?;
        let mut items = Vec::new();
        for part in split_top_level(inner)? {
            let part = part.trim();
            if part.is_empty() {
                continue;
            }
            items.push(parse_value(part)?);
        }
        return Ok(Value::Array(items));
    }
    if let Some(inner) = text.strip_prefix('"') {
        let inner = inner
            .strip_suffix('"')
            .ok_or_else(|| "unterminated string".to_string())?;
        return unescape(inner).map(Value::Str);
    }
    match text {
        "true" => return Ok(Value::Bool(true)),
        "false" => return Ok(Value::Bool(false)),
        _ => {}
    }
    let cleaned: String = text.chars().filter(|&c| c != '_').collect();
    if let Ok(x) = cleaned.parse::<f64>() {
        return Ok(Value::Number(x));
    }
    if text.chars().all(is_key_char) {
        // Bare words are accepted as strings (`geometry = c`).
        return Ok(Value::Str(text.to_string()));
    }
    Err(format!("cannot parse value `{text}`"))
}

fn split_top_level(text: &str) -> std::result::Result<Vec<&str>, String> {
    let mut parts = Vec::new();
    let mut in_string = false;
    let mut start = 0;
    let mut prev = ' ';
    for (i, c) in text.char_indices() {
        match c {
            '"' if prev != '\\' => in_string = !in_string,
            '[' | ']' if !in_string => return Err("nested arrays are not supported".into()),
            ',' if !in_string => {
                parts.push(&text[start..i]);
                start = i + 1;
            }
            _ => {}
        }
        prev = c;
    }
    parts.push(&text[start..]);
    Ok(parts)
}

fn unescape(s: &str) -> std::result::Result<String, String> {
    let mut out = String::with_capacity(s.len());
    let mut chars = s.chars();
    while let Some(c) = chars.next() {
        if c == '\\' {
            match chars.next() {
                Some('"') => out.push('"'),
                Some('\\') => out.push('\\'),
                Some('n') => out.push('\n'),
                Some('t') => out.push('\t'),
                other => return Err(format!("unsupported escape `\\{}`", other.unwrap_or(' '))),
            }
        } else if c == '"' {
            return Err("unescaped quote inside string".into());
        } else {
            out.push(c);
        }
    }
    Ok(out)
}

/// Typed, line-aware access to one section. Call [`SectionReader::finish`]
/// to reject keys that were never read.
pub struct SectionReader<'a> {
    origin: &'a str,
    section: &'a Section,
    used: BTreeSet<&'a str>,
}

impl<'a> SectionReader<'a> {
    pub fn section(&self) -> &'a Section {
        self.section
    }

    pub fn error(&self, line: usize, message: impl Into<String>) -> Error {
        Error::Schema {
            origin: self.origin.to_string(),
            line,
            message: message.into(),
        }
    }

    fn describe(&self) -> String {
        if self.section.name.is_empty() {
            "top level".to_string()
        } else {
            format!("section [{}]", self.section.name)
        }
    }

    pub fn entry(&mut self, key: &str) -> Option<&'a Entry> {
        let entry = self.section.entries.iter().find(|e| e.key == key)?;
        self.used.insert(entry.key.as_str());
        Some(entry)
    }

    fn require(&mut self, key: &str) -> Result<&'a Entry> {
        let line = self.section.line;
        let where_ = self.describe();
        self.entry(key)
            .ok_or_else(|| self.error(line, format!("{where_} is missing required key `{key}`")))
    }

    pub fn f64(&mut self, key: &str) -> Result<(f64, usize)> {
        let e = self.require(key)?;
        self.as_f64(e)
    }

    pub fn opt_f64(&mut self, key: &str) -> Result<Option<(f64, usize)>> {
        match self.entry(key) {
            Some(e) => self.as_f64(e).map(Some),
            None => Ok(None),
        }
    }

    fn as_f64(&self, e: &Entry) -> Result<(f64, usize)> {
        match e.value {
            Value::Number(x) if x.is_finite() => Ok((x, e.line)),
            Value::Number(_) => Err(self.error(e.line, format!("`{}` must be finite", e.key))),
            ref v => Err(self.error(
                e.line,
                format!("`{}` must be a number, found {}", e.key, v.kind()),
            )),
        }
    }

    pub fn string(&mut self, key: &str) -> Result<(String, usize)> {
        let e = self.require(key)?;
        self.as_string(e)
    }

    pub fn opt_string(&mut self, key: &str) -> Result<Option<(String, usize)>> {
        match self.entry(key) {
            Some(e) => self.as_string(e).map(Some),
            None => Ok(None),
        }
    }

    fn as_string(&self, e: &Entry) -> Result<(String, usize)> {
        match &e.value {
            Value::Str(s) => Ok((s.clone(), e.line)),
            v => Err(self.error(
                e.line,
                format!("`{}` must be a string, found {}", e.key, v.kind()),
            )),
        }
    }

    pub fn opt_f64_array(&mut self, key: &str) -> Result<Option<(Vec<f64>, usize)>> {
        let Some(e) = self.entry(key) else {
            return Ok(None);
        };
        match &e.value {
            Value::Array(items) => items
                .iter()
                .map(|v| match v {
                    Value::Number(x) if x.is_finite() => Ok(*x),
                    _ => Err(self.error(e.line, format!("`{}` must contain only numbers", e.key))),
                })
                .collect::<Result<Vec<_>>>()
                .map(|v| Some((v, e.line))),
            v => Err(self.error(
                e.line,
                format!("`{}` must be an array, found {}", e.key, v.kind()),
            )),
        }
    }

    /// Errors on the first key that was never read.
    pub fn finish(self) -> Result<()> {
        for e in &self.section.entries {
            if !self.used.contains(e.key.as_str()) {
                return Err(self.error(
                    e.line,
                    format!("unknown key `{}` in {}", e.key, self.describe()),
                ));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const DOC: &str = r#"
version = 1   # trailing comment
[first]
x = 1.5e3
name = "a # not a comment"
flags = [1, 2.5, -3]
bare = c

[second]
ok = true
"#;

    #[test]
    fn parses_values_and_lines() {
        let doc = Document::parse(DOC, "doc").unwrap();
        assert_eq!(doc.root().entries[0].value, Value::Number(1.0));
        let first = doc.section("first").unwrap();
        assert_eq!(first.line, 3);
        let mut r = doc.reader(first);
        assert_eq!(r.f64("x").unwrap(), (1500.0, 4));
        assert_eq!(r.string("name").unwrap().0, "a # not a comment");
        assert_eq!(r.opt_f64_array("flags").unwrap().unwrap().0, vec![1.0, 2.5, -3.0]);
        assert_eq!(r.string("bare").unwrap().0, "c");
        r.finish().unwrap();
    }

    #[test]
    fn unknown_key_reports_its_line() {
        let doc = Document::parse(DOC, "doc").unwrap();
        let mut r = doc.reader(doc.section("first").unwrap());
        r.f64("x").unwrap();
        match r.finish() {
            Err(Error::Schema { line, message, .. }) => {
                assert_eq!(line, 5);
                assert!(message.contains("name"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn missing_key_points_at_section_header() {
        let doc = Document::parse(DOC, "doc").unwrap();
        let mut r = doc.reader(doc.section("second").unwrap());
        match r.f64("absent") {
            Err(Error::Schema { line: 9, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn type_mismatch() {
        let doc = Document::parse(DOC, "doc").unwrap();
        let mut r = doc.reader(doc.section("second").unwrap());
        assert!(matches!(r.f64("ok"), Err(Error::Schema { line: 10, .. })));
    }

    #[test]
    fn syntax_errors_are_line_numbered() {
        for (text, line) in [
            ("a = 1\n[broken\n", 2),
            ("a = 1\na = 2\n", 2),
            ("\n\njust words here\n", 3),
            ("s = \"open\n", 1),
            ("[x]\n[x]\n", 2),
        ] {
            match Document::parse(text, "t") {
                Err(Error::Schema { line: l, .. }) => assert_eq!(l, line, "{text:?}"),
                other => panic!("{text:?}: {other:?}"),
            }
        }
    }
}
