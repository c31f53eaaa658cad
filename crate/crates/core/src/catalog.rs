//! The formula catalog: a flat text file of `[kind]` records with `key = value` lines.

use crate::congruence::CongruenceClaim;
use crate::error::{Error, Result};
use crate::exact::{parse_rational, Rational, Surd};
use crate::families::{Family, FamilySpec};
use crate::identities::{IdentityKind, IdentitySpec};
use crate::transforms::{Branch, Flag, Formula, Prop};
use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;

pub const EMBEDDED: &str = include_str!("../data/catalog.txt");

const HEADER: &str = "# formula catalog";
const PRINTED_KEYS: [&str; 4] = ["arg", "lin0", "lin1", "rhs"];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CompareMode {
    Exact,
    Scaled,
}

/// A stored transform relation `target = prop(source)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Derive {
    pub prop: Prop,
    pub source: String,
    pub target: String,
    pub sign: Option<Branch>,
    pub compare: CompareMode,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Remark {
    pub id: String,
    pub rhs: Surd,
    pub notes: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Slot {
    Formula(usize),
    Derive(usize),
    Claim(usize),
    Identity(usize),
    Remark(usize),
}

#[derive(Clone, Debug, Default)]
pub struct Catalog {
    pub version: String,
    pub formulas: Vec<Formula>,
    pub derives: Vec<Derive>,
    pub claims: Vec<CongruenceClaim>,
    pub identities: Vec<IdentitySpec>,
    pub remarks: Vec<Remark>,
    order: Vec<Slot>,
    index: HashMap<String, usize>,
}

struct Field {
    key: String,
    value: String,
    line: usize,
    col: usize,
}

struct Record {
    kind: String,
    line: usize,
    fields: Vec<Field>,
}

impl Record {
    fn take(&self, key: &str) -> Option<&Field> {
        self.fields.iter().find(|f| f.key == key)
    }

    fn need(&self, key: &str) -> Result<&Field> {
        self.take(key).ok_or_else(|| Error::Parse {
            line: self.line,
            col: 1,
            msg: format!("[{}] record is missing `{key}`", self.kind),
        })
    }
}

fn at(f: &Field, e: Error) -> Error {
    match e {
        Error::Parse { col, msg, .. } => Error::Parse { line: f.line, col: f.col + col - 1, msg },
        other => Error::Parse { line: f.line, col: f.col, msg: other.to_string() },
    }
}

fn surd(f: &Field) -> Result<Surd> {
    f.value.parse::<Surd>().map_err(|e| at(f, e))
}

fn rational(f: &Field) -> Result<Rational> {
    parse_rational(&f.value).map_err(|e| at(f, e))
}

fn integer<T: std::str::FromStr>(f: &Field) -> Result<T> {
    f.value.parse::<T>().map_err(|_| Error::Parse {
        line: f.line,
        col: f.col,
        msg: format!("bad integer `{}`", f.value),
    })
}

fn boolean(f: &Field) -> Result<bool> {
    match f.value.as_str() {
        "true" => Ok(true),
        "false" => Ok(false),
        _ => Err(Error::Parse { line: f.line, col: f.col, msg: format!("bad boolean `{}`", f.value) }),
    }
}

fn parsed<T: std::str::FromStr<Err = Error>>(f: &Field) -> Result<T> {
    f.value.parse::<T>().map_err(|e| at(f, e))
}

fn split_records(text: &str) -> Result<(String, Vec<Record>)> {
    let mut version = String::new();
    let mut records: Vec<Record> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        if let Some(kind) = trimmed.strip_prefix('[').and_then(|r| r.strip_suffix(']')) {
            records.push(Record { kind: kind.to_string(), line, fields: Vec::new() });
            continue;
        }
        let Some(eq) = raw.find(" = ") else {
            let col = raw.len() - raw.trim_start().len() + 1;
            return Err(Error::Parse { line, col, msg: "expected `key = value`".into() });
        };
        let key = raw[..eq].trim().to_string();
        let col = eq + 4;
        let value = raw[eq + 3..].to_string();
        match records.last_mut() {
            Some(r) => {
                if r.take(&key).is_some() {
                    return Err(Error::Parse { line, col: 1, msg: format!("repeated key `{key}`") });
                }
                r.fields.push(Field { key, value, line, col });
            }
            None if key == "version" => version = value,
            None => return Err(Error::Parse { line, col: 1, msg: format!("`{key}` outside a record") }),
        }
    }
    Ok((version, records))
}

fn check_keys(r: &Record, allowed: &[&str]) -> Result<()> {
    for f in &r.fields {
        let ok = allowed.contains(&f.key.as_str())
            || (r.kind == "formula" && (f.key.starts_with("printed.") || f.key.starts_with("raw.")));
        if !ok {
            return Err(Error::Parse { line: f.line, col: 1, msg: format!("unknown key `{}` in [{}]", f.key, r.kind) });
        }
    }
    Ok(())
}

fn formula(r: &Record) -> Result<Formula> {
    check_keys(
        r,
        &[
            "id",
            "provenance",
            "s",
            "family",
            "M",
            "arg",
            "lin0",
            "lin1",
            "rhs",
            "tau0_im_sq",
            "convergent",
            "digits",
            "flag",
            "notes",
        ],
    )?;
    let sf = r.need("s")?;
    let s = rational(sf)?;
    let kind: Family = parsed(r.need("family")?)?;
    let family = FamilySpec::new(kind, s).map_err(|e| at(sf, e))?;
    match (kind.uses_m(), r.take("M")) {
        (true, Some(mf)) => {
            if integer::<u64>(mf)? != family.m() {
                return Err(Error::Parse { line: mf.line, col: mf.col, msg: "M does not match s".into() });
            }
        }
        (true, None) => {
            r.need("M")?;
        }
        (false, Some(mf)) => {
            return Err(Error::Parse { line: mf.line, col: 1, msg: "M given for a family without M".into() })
        }
        (false, None) => {}
    }
    let mut printed = Vec::new();
    let mut raw = Vec::new();
    for f in &r.fields {
        if let Some(k) = f.key.strip_prefix("printed.") {
            if !PRINTED_KEYS.contains(&k) {
                return Err(Error::Parse { line: f.line, col: 1, msg: format!("unknown printed field `{k}`") });
            }
            printed.push((k.to_string(), surd(f)?));
        } else if let Some(k) = f.key.strip_prefix("raw.") {
            raw.push((k.to_string(), f.value.clone()));
        }
    }
    printed.sort_by_key(|(k, _)| PRINTED_KEYS.iter().position(|p| p == k));
    Ok(Formula {
        id: r.need("id")?.value.clone(),
        provenance: r.take("provenance").map(|f| f.value.clone()).unwrap_or_default(),
        family,
        arg: surd(r.need("arg")?)?,
        lin0: surd(r.need("lin0")?)?,
        lin1: surd(r.need("lin1")?)?,
        rhs: surd(r.need("rhs")?)?,
        tau0_im_sq: r.take("tau0_im_sq").map(rational).transpose()?,
        convergent: boolean(r.need("convergent")?)?,
        digits: r.take("digits").map(integer::<u32>).transpose()?,
        flag: r.take("flag").map(parsed::<Flag>).transpose()?,
        printed,
        raw,
        notes: r.take("notes").map(|f| f.value.clone()),
    })
}

fn derive(r: &Record) -> Result<Derive> {
    check_keys(r, &["prop", "source", "target", "sign", "compare"])?;
    let cf = r.need("compare")?;
    let compare = match cf.value.as_str() {
        "exact" => CompareMode::Exact,
        "scaled" => CompareMode::Scaled,
        _ => return Err(Error::Parse { line: cf.line, col: cf.col, msg: "compare must be exact or scaled".into() }),
    };
    Ok(Derive {
        prop: parsed(r.need("prop")?)?,
        source: r.need("source")?.value.clone(),
        target: r.need("target")?.value.clone(),
        sign: r.take("sign").map(parsed::<Branch>).transpose()?,
        compare,
    })
}

fn claim(r: &Record) -> Result<CongruenceClaim> {
    check_keys(r, &["id", "s", "lin0", "lin1", "base", "rhs_mult", "character_disc", "source"])?;
    Ok(CongruenceClaim {
        id: r.need("id")?.value.clone(),
        s: rational(r.need("s")?)?,
        lin0: integer(r.need("lin0")?)?,
        lin1: integer(r.need("lin1")?)?,
        base: integer(r.need("base")?)?,
        rhs_mult: integer(r.need("rhs_mult")?)?,
        character_disc: integer(r.need("character_disc")?)?,
        source: r.take("source").map(|f| f.value.clone()),
    })
}

fn identity(r: &Record) -> Result<IdentitySpec> {
    check_keys(r, &["prop", "s", "order"])?;
    Ok(IdentitySpec {
        kind: parsed::<IdentityKind>(r.need("prop")?)?,
        s: rational(r.need("s")?)?,
        order: integer(r.need("order")?)?,
    })
}

fn remark(r: &Record) -> Result<Remark> {
    check_keys(r, &["id", "rhs", "notes"])?;
    Ok(Remark { id: r.need("id")?.value.clone(), rhs: surd(r.need("rhs")?)?, notes: r.need("notes")?.value.clone() })
}

impl Catalog {
    pub fn parse(text: &str) -> Result<Catalog> {
        let (version, records) = split_records(text)?;
        let mut c = Catalog { version, ..Default::default() };
        for r in &records {
            match r.kind.as_str() {
                "formula" => {
                    let f = formula(r)?;
                    if c.index.contains_key(&f.id) {
                        return Err(Error::DuplicateId(f.id));
                    }
                    c.index.insert(f.id.clone(), c.formulas.len());
                    c.order.push(Slot::Formula(c.formulas.len()));
                    c.formulas.push(f);
                }
                "derive" => {
                    c.order.push(Slot::Derive(c.derives.len()));
                    c.derives.push(derive(r)?);
                }
                "claim" => {
                    let cl = claim(r)?;
                    if c.claims.iter().any(|x| x.id == cl.id) {
                        return Err(Error::DuplicateId(cl.id));
                    }
                    c.order.push(Slot::Claim(c.claims.len()));
                    c.claims.push(cl);
                }
                "identity" => {
                    c.order.push(Slot::Identity(c.identities.len()));
                    c.identities.push(identity(r)?);
                }
                "remark" => {
                    c.order.push(Slot::Remark(c.remarks.len()));
                    c.remarks.push(remark(r)?);
                }
                other => {
                    return Err(Error::Parse { line: r.line, col: 2, msg: format!("unknown record kind `{other}`") });
                }
            }
        }
        Ok(c)
    }

    pub fn embedded() -> Catalog {
        Catalog::parse(EMBEDDED).expect("embedded catalog parses")
    }

    pub fn load(path: &Path) -> Result<Catalog> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Catalog::parse(&text)
    }

    /// Embedded catalog unless a path is given.
    pub fn load_or_embedded(path: Option<&Path>) -> Result<Catalog> {
        match path {
            Some(p) => Catalog::load(p),
            None => Ok(Catalog::embedded()),
        }
    }

    pub fn get(&self, id: &str) -> Result<&Formula> {
        self.index.get(id).map(|&i| &self.formulas[i]).ok_or_else(|| Error::UnknownId(id.to_string()))
    }

    pub fn claim(&self, id: &str) -> Result<&CongruenceClaim> {
        self.claims.iter().find(|c| c.id == id).ok_or_else(|| Error::UnknownId(id.to_string()))
    }

    /// Append a formula, keeping ids unique.
    pub fn push_formula(&mut self, f: Formula) -> Result<()> {
        if self.index.contains_key(&f.id) {
            return Err(Error::DuplicateId(f.id));
        }
        self.index.insert(f.id.clone(), self.formulas.len());
        self.order.push(Slot::Formula(self.formulas.len()));
        self.formulas.push(f);
        Ok(())
    }

    /// Replace a stored formula with the same id.
    pub fn replace_formula(&mut self, f: Formula) -> Result<()> {
        let i = *self.index.get(&f.id).ok_or_else(|| Error::UnknownId(f.id.clone()))?;
        self.formulas[i] = f;
        Ok(())
    }

    pub fn serialize(&self) -> String {
        let mut out = String::new();
        out.push_str(HEADER);
        out.push('\n');
        if !self.version.is_empty() {
            let _ = writeln!(out, "version = {}", self.version);
        }
        for slot in &self.order {
            out.push('\n');
            match *slot {
                Slot::Formula(i) => write_formula(&mut out, &self.formulas[i]),
                Slot::Derive(i) => write_derive(&mut out, &self.derives[i]),
                Slot::Claim(i) => write_claim(&mut out, &self.claims[i]),
                Slot::Identity(i) => write_identity(&mut out, &self.identities[i]),
                Slot::Remark(i) => write_remark(&mut out, &self.remarks[i]),
            }
        }
        out
    }

    /// Structural problems: convergent flags that disagree with the disk test,
    /// divergent rows with no purpose, dangling references.
    pub fn problems(&self) -> Vec<String> {
        let mut out = Vec::new();
        for f in &self.formulas {
            if f.convergent && !f.in_disk() {
                out.push(format!("{}: marked convergent outside the disk", f.id));
            }
            if !f.convergent && f.in_disk() {
                out.push(format!("{}: marked divergent inside the disk", f.id));
            }
            let claimed = self.claims.iter().any(|c| c.source.as_deref() == Some(f.id.as_str()));
            if !f.convergent && !claimed && f.notes.is_none() {
                out.push(format!("{}: divergent with no claim or note", f.id));
            }
            if f.rhs.is_zero() {
                out.push(format!("{}: zero right hand side", f.id));
            }
        }
        for d in &self.derives {
            for id in [&d.source, &d.target] {
                if self.get(id).is_err() {
                    out.push(format!("derive refers to unknown `{id}`"));
                }
            }
        }
        for c in &self.claims {
            if let Some(src) = &c.source {
                if self.get(src).is_err() {
                    out.push(format!("claim {} refers to unknown `{src}`", c.id));
                }
            }
        }
        out
    }
}

/// One `[formula]` record in catalog syntax.
pub fn formula_record(f: &Formula) -> String {
    let mut out = String::new();
    write_formula(&mut out, f);
    out
}

fn write_formula(out: &mut String, f: &Formula) {
    let _ = writeln!(out, "[formula]");
    let _ = writeln!(out, "id = {}", f.id);
    if !f.provenance.is_empty() {
        let _ = writeln!(out, "provenance = {}", f.provenance);
    }
    let _ = writeln!(out, "s = {}", f.family.s);
    let _ = writeln!(out, "family = {}", f.family.kind);
    if f.family.kind.uses_m() {
        let _ = writeln!(out, "M = {}", f.family.m());
    }
    let _ = writeln!(out, "arg = {}", f.arg);
    let _ = writeln!(out, "lin0 = {}", f.lin0);
    let _ = writeln!(out, "lin1 = {}", f.lin1);
    let _ = writeln!(out, "rhs = {}", f.rhs);
    if let Some(t) = &f.tau0_im_sq {
        let _ = writeln!(out, "tau0_im_sq = {t}");
    }
    let _ = writeln!(out, "convergent = {}", f.convergent);
    if let Some(d) = f.digits {
        let _ = writeln!(out, "digits = {d}");
    }
    if let Some(fl) = f.flag {
        let _ = writeln!(out, "flag = {fl}");
    }
    for (k, v) in &f.printed {
        let _ = writeln!(out, "printed.{k} = {v}");
    }
    for (k, v) in &f.raw {
        let _ = writeln!(out, "raw.{k} = {v}");
    }
    if let Some(n) = &f.notes {
        let _ = writeln!(out, "notes = {n}");
    }
}

fn write_derive(out: &mut String, d: &Derive) {
    let _ = writeln!(out, "[derive]");
    let _ = writeln!(out, "prop = {}", d.prop);
    let _ = writeln!(out, "source = {}", d.source);
    let _ = writeln!(out, "target = {}", d.target);
    if let Some(s) = d.sign {
        let _ = writeln!(out, "sign = {s}");
    }
    let _ = writeln!(
        out,
        "compare = {}",
        match d.compare {
            CompareMode::Exact => "exact",
            CompareMode::Scaled => "scaled",
        }
    );
}

fn write_claim(out: &mut String, c: &CongruenceClaim) {
    let _ = writeln!(out, "[claim]");
    let _ = writeln!(out, "id = {}", c.id);
    let _ = writeln!(out, "s = {}", c.s);
    let _ = writeln!(out, "lin0 = {}", c.lin0);
    let _ = writeln!(out, "lin1 = {}", c.lin1);
    let _ = writeln!(out, "base = {}", c.base);
    let _ = writeln!(out, "rhs_mult = {}", c.rhs_mult);
    let _ = writeln!(out, "character_disc = {}", c.character_disc);
    if let Some(s) = &c.source {
        let _ = writeln!(out, "source = {s}");
    }
}

fn write_identity(out: &mut String, i: &IdentitySpec) {
    let _ = writeln!(out, "[identity]");
    let _ = writeln!(out, "prop = {}", i.kind);
    let _ = writeln!(out, "s = {}", i.s);
    let _ = writeln!(out, "order = {}", i.order);
}

fn write_remark(out: &mut String, r: &Remark) {
    let _ = writeln!(out, "[remark]");
    let _ = writeln!(out, "id = {}", r.id);
    let _ = writeln!(out, "rhs = {}", r.rhs);
    let _ = writeln!(out, "notes = {}", r.notes);
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn embedded_round_trip() {
        let c = Catalog::embedded();
        assert!(c.formulas.len() >= 60);
        assert_eq!(c.claims.len(), 2);
        assert_eq!(c.serialize(), EMBEDDED);
        assert!(c.problems().is_empty(), "{:?}", c.problems());
    }

    #[test]
    fn empty_file() {
        let c = Catalog::parse("").unwrap();
        assert!(c.formulas.is_empty());
    }

    #[test]
    fn malformed_surd_reports_position() {
        let text = "[formula]\nid = x\ns = 1/3\nfamily = prop7\narg = 1/9\nlin0 = 1/4*sqrt(3\nlin1 = 1\nrhs = 1\nconvergent = true\n";
        match Catalog::parse(text) {
            Err(Error::Parse { line, col, .. }) => {
                assert_eq!(line, 6);
                assert_eq!(col, 18);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn duplicate_ids_rejected() {
        let rec =
            "[formula]\nid = x\ns = 1/3\nfamily = prop7\narg = 1/9\nlin0 = 1\nlin1 = 1\nrhs = 1\nconvergent = true\n\n";
        let text = format!("{rec}{rec}");
        assert_eq!(Catalog::parse(&text).unwrap_err(), Error::DuplicateId("x".into()));
    }
}
