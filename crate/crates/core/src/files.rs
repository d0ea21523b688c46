//! Plain-text formats for morphisms, semilinear maps and tabulated maps.
//!
//! ```text
//! # comment
//! field gf 2 modulus w^2+w+1
//! dom 2
//! cod 2
//! x -> x + y*y
//! y -> y
//! ```
//!
//! Semilinear map files add `alpha frob^e`, `mirror 0|1` and an `inverse:`
//! section listing the inverse witness. Tabulated maps add `degcap D` and
//! one `<word> -> <poly>` row per word of degree ≤ D (`1` is the empty word).

use std::collections::BTreeMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::classifier::{ClassifyError, SemiInnerFactorization, WordMap};
use crate::freealg::{NcPoly, VarNames, Word};
use crate::morphisms::{AutWitness, Morphism, SemiLinearMap};
use crate::scalars::{Field, FieldAut};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FileError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("missing `{0}` header")]
    MissingHeader(&'static str),
    #[error("incomplete file: {0}")]
    Incomplete(String),
    #[error("{0}")]
    Invalid(String),
}

fn syntax(line: usize, msg: impl Into<String>) -> FileError {
    FileError::Syntax { line, msg: msg.into() }
}

/// `Q`, `gf <q>`, `gf<q>` or `gf <p> modulus <poly in w>`.
pub fn parse_field_text(text: &str) -> Result<Field, String> {
    let text = text.trim();
    if text == "Q" || text == "QQ" {
        return Ok(Field::rationals());
    }
    let rest = text.strip_prefix("gf").or_else(|| text.strip_prefix("GF")).ok_or(format!("unknown field `{text}`"))?;
    let (order, modulus) = match rest.split_once("modulus") {
        Some((o, m)) => (o.trim(), Some(m.trim())),
        None => (rest.trim(), None),
    };
    let order = order.trim_start_matches(['(', ' ']).trim_end_matches(')');
    let q: u64 = order.parse().map_err(|_| format!("bad field order `{order}`"))?;
    match modulus {
        None => Field::gf(q).map_err(|e| e.to_string()),
        Some(m) => {
            let coeffs = parse_modulus(m, q)?;
            Field::extension(q, coeffs).map_err(|e| e.to_string())
        }
    }
}

/// Coefficients (low to high) of a polynomial in `w` over GF(p).
pub fn parse_modulus(text: &str, p: u64) -> Result<Vec<u64>, String> {
    let base = Field::prime(p).map_err(|e| e.to_string())?;
    let poly = NcPoly::parse_with(&text.replace('w', "t"), &base, &VarNames::custom(["t"]))
        .map_err(|e| format!("bad modulus `{text}`: {e}"))?;
    let deg = poly.degree().finite().ok_or("modulus is zero")?;
    let mut out = vec![0; deg + 1];
    for (w, c) in poly.terms() {
        out[w.len()] = c.index().expect("prime field element");
    }
    Ok(out)
}

struct Parsed {
    headers: BTreeMap<String, (usize, String)>,
    rows: Vec<(usize, String, String)>,
    inverse: Option<Vec<(usize, String, String)>>,
}

impl Parsed {
    fn read(text: &str, allowed: &[&str]) -> Result<Parsed, FileError> {
        let mut out = Parsed { headers: BTreeMap::new(), rows: Vec::new(), inverse: None };
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            if content == "inverse:" {
                if !allowed.contains(&"inverse:") {
                    return Err(syntax(line, "unexpected `inverse:` section"));
                }
                if out.inverse.is_some() {
                    return Err(syntax(line, "duplicate `inverse:` section"));
                }
                out.inverse = Some(Vec::new());
                continue;
            }
            if let Some((lhs, rhs)) = content.split_once("->") {
                let row = (line, lhs.trim().to_string(), rhs.trim().to_string());
                match &mut out.inverse {
                    Some(inv) => inv.push(row),
                    None => out.rows.push(row),
                }
                continue;
            }
            if out.inverse.is_some() || !out.rows.is_empty() {
                return Err(syntax(line, format!("header `{content}` after map rows")));
            }
            let (key, value) = content.split_once(char::is_whitespace).unwrap_or((content, ""));
            if !allowed.contains(&key) {
                return Err(syntax(line, format!("unknown header `{key}`")));
            }
            if out.headers.insert(key.to_string(), (line, value.trim().to_string())).is_some() {
                return Err(syntax(line, format!("duplicate header `{key}`")));
            }
        }
        Ok(out)
    }

    fn get(&self, key: &'static str) -> Result<(usize, &str), FileError> {
        self.headers.get(key).map(|(l, v)| (*l, v.as_str())).ok_or(FileError::MissingHeader(key))
    }

    fn field(&self) -> Result<Field, FileError> {
        let (line, v) = self.get("field")?;
        parse_field_text(v).map_err(|e| syntax(line, e))
    }

    fn count(&self, key: &'static str) -> Result<usize, FileError> {
        let (line, v) = self.get(key)?;
        v.parse().map_err(|_| syntax(line, format!("`{key}` needs a nonnegative integer, got `{v}`")))
    }

    fn arity(&self, key: &'static str) -> Result<usize, FileError> {
        let n = self.count(key)?;
        if n == 0 {
            return Err(syntax(self.get(key)?.0, format!("`{key}` must be positive")));
        }
        Ok(n)
    }

    /// `dom`, with an optional `cod` that must agree.
    fn square_arity(&self) -> Result<usize, FileError> {
        let n = self.arity("dom")?;
        if self.headers.contains_key("cod") && self.arity("cod")? != n {
            return Err(syntax(self.get("cod")?.0, "domain and codomain arities differ"));
        }
        Ok(n)
    }

    fn alpha(&self, field: &Field) -> Result<FieldAut, FileError> {
        let Ok((line, v)) = self.get("alpha") else {
            return Ok(FieldAut::identity(field));
        };
        let e = if v == "id" {
            0
        } else {
            v.strip_prefix("frob^")
                .and_then(|e| e.parse().ok())
                .ok_or_else(|| syntax(line, format!("`alpha` must be `id` or `frob^e`, got `{v}`")))?
        };
        FieldAut::new(field, e).map_err(|err| syntax(line, err.to_string()))
    }

    fn mirror(&self) -> Result<bool, FileError> {
        match self.get("mirror") {
            Err(_) => Ok(false),
            Ok((_, "0")) => Ok(false),
            Ok((_, "1")) => Ok(true),
            Ok((line, v)) => Err(syntax(line, format!("`mirror` must be 0 or 1, got `{v}`"))),
        }
    }
}

fn parse_images(rows: &[(usize, String, String)], field: &Field, dom: usize, cod: usize) -> Result<Vec<NcPoly>, FileError> {
    let dom_names = VarNames::canonical(dom);
    let mut images: Vec<Option<NcPoly>> = vec![None; dom];
    for (line, lhs, rhs) in rows {
        let i = dom_names.lookup(lhs).ok_or_else(|| syntax(*line, format!("`{lhs}` is not a generator of W{dom}")))?;
        if images[i - 1].is_some() {
            return Err(syntax(*line, format!("second image for `{lhs}`")));
        }
        let p = NcPoly::parse(rhs, field, cod).map_err(|e| syntax(*line, e.to_string()))?;
        images[i - 1] = Some(p);
    }
    images
        .into_iter()
        .enumerate()
        .map(|(i, p)| p.ok_or_else(|| FileError::Incomplete(format!("no image for `{}`", dom_names.name(i + 1)))))
        .collect()
}

pub fn parse_morphism(text: &str) -> Result<Morphism, FileError> {
    let f = Parsed::read(text, &["field", "dom", "cod"])?;
    let field = f.field()?;
    let (dom, cod) = (f.arity("dom")?, f.arity("cod")?);
    let images = parse_images(&f.rows, &field, dom, cod)?;
    Morphism::new(&field, dom, cod, images).map_err(|e| FileError::Invalid(e.to_string()))
}

fn write_header(out: &mut String, field: &Field, dom: usize, cod: usize) {
    writeln!(out, "field {field}").unwrap();
    writeln!(out, "dom {dom}").unwrap();
    writeln!(out, "cod {cod}").unwrap();
}

fn write_images(out: &mut String, m: &Morphism) {
    for line in m.format_images() {
        writeln!(out, "{line}").unwrap();
    }
}

pub fn write_morphism(m: &Morphism) -> String {
    let mut out = String::new();
    write_header(&mut out, m.field(), m.dom(), m.cod());
    write_images(&mut out, m);
    out
}

pub fn parse_semilinear(text: &str) -> Result<SemiLinearMap, FileError> {
    let f = Parsed::read(text, &["field", "dom", "cod", "alpha", "mirror", "inverse:"])?;
    let field = f.field()?;
    let n = f.square_arity()?;
    let alpha = f.alpha(&field)?;
    let mirror = f.mirror()?;
    let inverse = f.inverse.as_ref().ok_or_else(|| FileError::Incomplete("missing `inverse:` section".into()))?;
    let fwd = Morphism::new(&field, n, n, parse_images(&f.rows, &field, n, n)?).map_err(|e| FileError::Invalid(e.to_string()))?;
    let inv = Morphism::new(&field, n, n, parse_images(inverse, &field, n, n)?).map_err(|e| FileError::Invalid(e.to_string()))?;
    let eta = AutWitness::new(fwd, inv).map_err(|e| FileError::Invalid(e.to_string()))?;
    SemiLinearMap::new(alpha, mirror, eta).map_err(|e| FileError::Invalid(e.to_string()))
}

pub fn write_semilinear(mu: &SemiLinearMap) -> String {
    let mut out = String::new();
    let n = mu.arity();
    write_header(&mut out, mu.field(), n, n);
    writeln!(out, "alpha {}", mu.alpha()).unwrap();
    writeln!(out, "mirror {}", u8::from(mu.is_mirror())).unwrap();
    write_images(&mut out, mu.eta().fwd());
    writeln!(out, "inverse:").unwrap();
    write_images(&mut out, mu.eta().inv());
    out
}

fn parse_word(text: &str, names: &VarNames, field: &Field, line: usize) -> Result<Word, FileError> {
    let p = NcPoly::parse_with(text, field, names).map_err(|e| syntax(line, e.to_string()))?;
    let mut terms = p.terms();
    match (terms.next(), terms.next()) {
        (Some((w, c)), None) if c.is_one() => Ok(w.clone()),
        _ => Err(syntax(line, format!("`{text}` is not a word"))),
    }
}

pub fn parse_wordmap(text: &str) -> Result<WordMap, FileError> {
    let f = Parsed::read(text, &["field", "dom", "cod", "alpha", "degcap"])?;
    let field = f.field()?;
    let n = f.square_arity()?;
    let alpha = f.alpha(&field)?;
    let cap = f.count("degcap")?;
    let names = VarNames::canonical(n);
    let mut table = BTreeMap::new();
    for (line, lhs, rhs) in &f.rows {
        let w = parse_word(lhs, &names, &field, *line)?;
        if w.len() > cap {
            return Err(syntax(*line, format!("word `{lhs}` exceeds degcap {cap}")));
        }
        let p = NcPoly::parse(rhs, &field, n).map_err(|e| syntax(*line, e.to_string()))?;
        if table.insert(w, p).is_some() {
            return Err(syntax(*line, format!("second row for `{lhs}`")));
        }
    }
    WordMap::new(alpha, n, cap, table).map_err(|e| match e {
        ClassifyError::Table(msg) => FileError::Incomplete(msg),
        other => FileError::Invalid(other.to_string()),
    })
}

pub fn write_wordmap(mu: &WordMap) -> String {
    let mut out = String::new();
    let n = mu.arity();
    write_header(&mut out, mu.field(), n, n);
    writeln!(out, "alpha {}", mu.alpha()).unwrap();
    writeln!(out, "degcap {}", mu.deg_cap()).unwrap();
    let names = VarNames::canonical(n);
    for (w, p) in mu.table() {
        let lhs = if w.is_empty() { "1".to_string() } else { w.format_with(&names) };
        writeln!(out, "{lhs} -> {p}").unwrap();
    }
    out
}

/// A map file holding either a table or a semilinear map with its witness.
#[derive(Debug, Clone)]
pub enum MapFile {
    Table(WordMap),
    SemiLinear(SemiLinearMap),
}

/// Files with a `degcap` header are tables, others semilinear maps.
pub fn parse_map_file(text: &str) -> Result<MapFile, FileError> {
    let is_table = text.lines().any(|l| l.split('#').next().unwrap_or("").trim_start().starts_with("degcap"));
    if is_table {
        parse_wordmap(text).map(MapFile::Table)
    } else {
        parse_semilinear(text).map(MapFile::SemiLinear)
    }
}

pub fn format_factorization(f: &SemiInnerFactorization) -> String {
    let mut out = String::new();
    writeln!(out, "alpha: {}", f.alpha).unwrap();
    writeln!(out, "mirror: {}", u8::from(f.mirror)).unwrap();
    for (i, images) in f.eta_images.iter().enumerate() {
        let names = VarNames::canonical(i + 1);
        for (k, p) in images.iter().enumerate() {
            writeln!(out, "eta[{}]: {} -> {}", i + 1, names.name(k + 1), p).unwrap();
        }
    }
    writeln!(out, "verified: {}", f.verified).unwrap();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classifier::tabulate;
    use crate::random;

    #[test]
    fn field_texts() {
        assert_eq!(parse_field_text("Q").unwrap(), Field::rationals());
        assert_eq!(parse_field_text("gf4").unwrap(), Field::gf(4).unwrap());
        assert_eq!(parse_field_text("gf 5").unwrap(), Field::prime(5).unwrap());
        let f = parse_field_text("gf 3 modulus w^2+1").unwrap();
        assert_eq!(f.modulus(), Some(&[1, 0, 1][..]));
        assert_eq!(parse_field_text(&f.to_string()).unwrap(), f);
        assert!(parse_field_text("gf 2 modulus w^2+1").is_err());
        assert!(parse_field_text("gf6").is_err());
        assert!(parse_field_text("R").is_err());
    }

    #[test]
    fn morphism_round_trip() {
        let text = "# elementary\nfield Q\ndom 2\ncod 3\nx -> x + y*y  # tail\ny -> 1/2*z\n";
        let m = parse_morphism(text).unwrap();
        assert_eq!(m.format_images(), ["x -> x + y*y", "y -> 1/2*z"]);
        assert_eq!(parse_morphism(&write_morphism(&m)).unwrap(), m);
        let f4 = Field::gf(4).unwrap();
        let r = random::morphism(&mut random::rng(4), &f4, 3, 2, 2, 3);
        assert_eq!(parse_morphism(&write_morphism(&r)).unwrap(), r);
    }

    #[test]
    fn rejections() {
        assert_eq!(parse_morphism("field Q\ndom 2\ncod 2\nx -> y\n"), Err(FileError::Incomplete("no image for `y`".into())));
        assert_eq!(parse_morphism("dom 2\ncod 2\nx -> y\n"), Err(FileError::MissingHeader("field")));
        assert!(matches!(parse_morphism("field Q\ndom 2\ncod 2\nx -> u\ny -> y\n"), Err(FileError::Syntax { line: 4, .. })));
        assert!(matches!(parse_morphism("field Q\ndom 2\ncod 2\nx -> x\nx -> y\n"), Err(FileError::Syntax { line: 5, .. })));
        assert!(matches!(parse_morphism("field Q\nsize 2\n"), Err(FileError::Syntax { line: 2, .. })));
        let no_inverse = "field Q\ndom 1\nx -> x\n";
        assert!(matches!(parse_semilinear(no_inverse), Err(FileError::Incomplete(_))));
        let not_inverse = "field Q\ndom 1\nx -> 2*x\ninverse:\nx -> x\n";
        assert!(matches!(parse_semilinear(not_inverse), Err(FileError::Invalid(_))));
        let short_table = "field Q\ndom 1\ndegcap 2\n1 -> 1\nx -> x\n";
        assert!(matches!(parse_wordmap(short_table), Err(FileError::Incomplete(_))));
        assert!(matches!(parse_wordmap("field Q\ndom 1\ndegcap 1\n1 -> 1\n2*x -> x\n"), Err(FileError::Syntax { line: 5, .. })));
    }

    #[test]
    fn semilinear_round_trip() {
        let f4 = Field::gf(4).unwrap();
        let mu = random::semilinear(&mut random::rng(1), &f4, 2, FieldAut::frobenius(&f4), true);
        let text = write_semilinear(&mu);
        assert!(text.starts_with("field gf 2 modulus w^2+w+1\ndom 2\ncod 2\nalpha frob^1\nmirror 1\n"));
        let back = parse_semilinear(&text).unwrap();
        assert_eq!(write_semilinear(&back), text);
        assert!(matches!(parse_map_file(&text).unwrap(), MapFile::SemiLinear(_)));
    }

    #[test]
    fn wordmap_round_trip() {
        let q = Field::rationals();
        let tab = tabulate(&SemiLinearMap::pure_mirror(&q, 2), 2);
        let text = write_wordmap(&tab);
        assert!(text.contains("\n1 -> 1\n"));
        assert!(text.contains("\nx*y -> y*x\n"));
        assert_eq!(parse_wordmap(&text).unwrap(), tab);
        match parse_map_file(&text).unwrap() {
            MapFile::Table(t) => assert_eq!(t, tab),
            MapFile::SemiLinear(_) => panic!("expected a table"),
        }
    }
}
