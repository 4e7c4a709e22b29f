//! Finitely presented algebras with optional Hopf data, and their text
//! file format.
//!
//! ```text
//! algebra <name>
//! params h [eps]
//! gens <g1> < <g2> < ...
//! alias <spelling> = <gen>
//! rel [<gj>,<gi>] = <expression>
//! extra <word> = <expression>
//! coproduct <g> = <tensor expression, @ for the tensor sign>
//! counit <g> = <scalar expression>
//! antipode <g> = <expression>
//! central <g>...
//! note <target> : <text>
//! scaling <name> ... end
//! ```

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::expr::{is_reserved, parse_at, Expr, SymbolTable};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    /// Generator with the larger index.
    pub left: String,
    pub right: String,
    pub rhs: Expr,
}

impl Relation {
    pub fn label(&self) -> String {
        format!("[{},{}]", self.left, self.right)
    }
}

/// `word = rhs`, a leading-word identity such as a determinant condition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtraRule {
    pub word: Vec<String>,
    pub rhs: Expr,
}

impl ExtraRule {
    pub fn label(&self) -> String {
        self.word.join("*")
    }
}

/// Per-generator structure maps, in generator order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HopfSpec {
    pub coproduct: BTreeMap<String, Expr>,
    pub counit: BTreeMap<String, Expr>,
    pub antipode: BTreeMap<String, Expr>,
}

impl HopfSpec {
    fn is_empty(&self) -> bool {
        self.coproduct.is_empty() && self.counit.is_empty() && self.antipode.is_empty()
    }
}

/// A remark attached to part of a presentation; it is echoed in reports
/// and never fails a run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Annotation {
    pub target: String,
    pub text: String,
}

/// Generator adjoined to the source of a contraction, with its Hopf data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Extension {
    pub name: String,
    pub coproduct: Option<Expr>,
    pub counit: Option<Expr>,
    pub antipode: Option<Expr>,
}

/// Textual form of a generator rescaling; resolved by the contraction
/// engine.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ScalingSpec {
    pub name: String,
    pub source: String,
    pub target: String,
    pub extensions: Vec<Extension>,
    pub assignments: Vec<(String, Expr)>,
    pub renorm: Vec<(String, i32)>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Presentation {
    pub name: String,
    pub uses_eps: bool,
    pub generators: Vec<String>,
    pub aliases: Vec<(String, String)>,
    pub relations: Vec<Relation>,
    pub extra: Vec<ExtraRule>,
    pub hopf: Option<HopfSpec>,
    pub central: Vec<String>,
    pub annotations: Vec<Annotation>,
    pub scalings: Vec<ScalingSpec>,
}

fn valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_alphabetic() => {}
        _ => return false,
    }
    !is_reserved(name)
        && name
            .chars()
            .all(|c| c.is_alphanumeric() || matches!(c, '_' | '+' | '-' | '\''))
}

impl Presentation {
    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g == name)
    }

    pub fn symbols(&self) -> SymbolTable {
        let mut t = SymbolTable::from_names(&self.generators);
        for (alias, canon) in &self.aliases {
            t.add(alias, canon);
        }
        t
    }

    pub fn has_hopf(&self) -> bool {
        self.hopf.is_some()
    }

    /// Adds `[x, y] = rhs`, swapping to `[y, x] = -rhs` when `x` precedes `y`.
    pub fn add_relation(&mut self, x: &str, y: &str, rhs: Expr) -> Result<()> {
        let ix = self
            .index_of(x)
            .ok_or_else(|| Error::Validation(format!("relation uses undeclared generator {x}")))?;
        let iy = self
            .index_of(y)
            .ok_or_else(|| Error::Validation(format!("relation uses undeclared generator {y}")))?;
        if ix == iy {
            return Err(Error::MalformedRelation(format!(
                "[{x},{y}] is trivially zero"
            )));
        }
        let rel = if ix > iy {
            Relation {
                left: x.to_string(),
                right: y.to_string(),
                rhs,
            }
        } else {
            let rhs = match rhs {
                Expr::Neg(inner) => *inner,
                other => Expr::Neg(Box::new(other)),
            };
            Relation {
                left: y.to_string(),
                right: x.to_string(),
                rhs,
            }
        };
        if self
            .relations
            .iter()
            .any(|r| r.left == rel.left && r.right == rel.right)
        {
            return Err(Error::Validation(format!(
                "duplicate relation for {}",
                rel.label()
            )));
        }
        self.relations.push(rel);
        Ok(())
    }

    pub fn relation(&self, left: &str, right: &str) -> Option<&Relation> {
        self.relations
            .iter()
            .find(|r| r.left == left && r.right == right)
    }

    /// Checks that every expression refers only to declared generators and
    /// that Hopf data, when present, covers every generator.
    pub fn validate(&self) -> Result<()> {
        let declared: BTreeSet<&str> = self.generators.iter().map(String::as_str).collect();
        if declared.len() != self.generators.len() {
            return Err(Error::Validation("duplicate generator".into()));
        }
        for g in &self.generators {
            if !valid_name(g) {
                return Err(Error::Validation(format!("invalid generator name {g}")));
            }
        }
        let check = |what: String, e: &Expr| -> Result<()> {
            for g in e.generators() {
                if !declared.contains(g) {
                    return Err(Error::Validation(format!(
                        "{what} uses undeclared generator {g}"
                    )));
                }
            }
            Ok(())
        };
        for r in &self.relations {
            let (il, ir) = match (self.index_of(&r.left), self.index_of(&r.right)) {
                (Some(a), Some(b)) => (a, b),
                _ => {
                    return Err(Error::Validation(format!(
                        "relation {} uses undeclared generator",
                        r.label()
                    )))
                }
            };
            if il <= ir {
                return Err(Error::MalformedRelation(format!(
                    "relation {} is not in [later, earlier] form",
                    r.label()
                )));
            }
            check(format!("relation {}", r.label()), &r.rhs)?;
        }
        for x in &self.extra {
            if x.word.is_empty() || x.word.iter().any(|g| !declared.contains(g.as_str())) {
                return Err(Error::Validation(format!(
                    "extra rule {} has an invalid leading word",
                    x.label()
                )));
            }
            check(format!("extra rule {}", x.label()), &x.rhs)?;
        }
        for c in &self.central {
            if !declared.contains(c.as_str()) {
                return Err(Error::Validation(format!(
                    "central generator {c} undeclared"
                )));
            }
        }
        if let Some(h) = &self.hopf {
            for g in &self.generators {
                for (map, what) in [
                    (&h.coproduct, "coproduct"),
                    (&h.counit, "counit"),
                    (&h.antipode, "antipode"),
                ] {
                    let e = map.get(g).ok_or_else(|| {
                        Error::Validation(format!("missing {what} for generator {g}"))
                    })?;
                    check(format!("{what} of {g}"), e)?;
                }
            }
            for map in [&h.coproduct, &h.counit, &h.antipode] {
                if let Some(extra) = map.keys().find(|k| !declared.contains(k.as_str())) {
                    return Err(Error::Validation(format!(
                        "Hopf data for undeclared generator {extra}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// The same presentation without Hopf data.
    pub fn without_hopf(&self) -> Presentation {
        Presentation {
            hopf: None,
            ..self.clone()
        }
    }
}

struct LineCursor<'a> {
    number: usize,
    text: &'a str,
}

impl<'a> LineCursor<'a> {
    fn err(&self, column: usize, message: impl Into<String>) -> Error {
        Error::parse(self.number, column, message)
    }

    /// Column (1-based) of a sub-slice of this line.
    fn column_of(&self, part: &str) -> usize {
        part.as_ptr() as usize - self.text.as_ptr() as usize + 1
    }

    fn expr(&self, part: &str, symbols: &SymbolTable) -> Result<Expr> {
        parse_at(part, symbols, self.number, self.column_of(part))
    }
}

fn split_assignment<'a>(cur: &LineCursor<'a>, rest: &'a str) -> Result<(&'a str, &'a str)> {
    match rest.split_once('=') {
        Some((lhs, rhs)) => Ok((lhs.trim(), rhs.trim())),
        None => Err(cur.err(cur.column_of(rest), "expected '='")),
    }
}

fn parse_word(cur: &LineCursor<'_>, part: &str, symbols: &SymbolTable) -> Result<Vec<String>> {
    fn flatten(e: &Expr, out: &mut Vec<String>) -> bool {
        match e {
            Expr::Gen(g) => {
                out.push(g.clone());
                true
            }
            Expr::Mul(a, b) => flatten(a, out) && flatten(b, out),
            Expr::Pow(a, k) if *k >= 1 => {
                let mut inner = Vec::new();
                if !flatten(a, &mut inner) {
                    return false;
                }
                for _ in 0..*k {
                    out.extend(inner.iter().cloned());
                }
                true
            }
            _ => false,
        }
    }
    let e = cur.expr(part, symbols)?;
    let mut out = Vec::new();
    if flatten(&e, &mut out) {
        Ok(out)
    } else {
        Err(cur.err(
            cur.column_of(part),
            "leading word must be a product of generators",
        ))
    }
}

/// Parses a presentation file. Scaling blocks have their expressions parsed
/// against `resolve(source)` plus the declared extension generators.
pub fn load_presentation_with(
    source: &str,
    resolve: &dyn Fn(&str) -> Option<Presentation>,
) -> Result<Presentation> {
    let mut p = Presentation::default();
    let mut symbols = SymbolTable::new();
    let mut saw_algebra = false;
    let mut lines = source.lines().enumerate().peekable();
    while let Some((idx, raw)) = lines.next() {
        let cur = LineCursor {
            number: idx + 1,
            text: raw,
        };
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (keyword, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        let rest = rest.trim();
        match keyword {
            "algebra" => {
                if rest.is_empty() {
                    return Err(cur.err(1, "missing algebra name"));
                }
                p.name = rest.to_string();
                saw_algebra = true;
            }
            "params" => {
                let params: Vec<&str> = rest.split_whitespace().collect();
                if !params.contains(&"h") || params.iter().any(|x| !matches!(*x, "h" | "eps")) {
                    return Err(cur.err(cur.column_of(rest), "params must be 'h' or 'h eps'"));
                }
                p.uses_eps = params.contains(&"eps");
            }
            "gens" => {
                if !p.generators.is_empty() {
                    return Err(cur.err(1, "generators declared twice"));
                }
                for g in rest.split('<') {
                    let g = g.trim();
                    if !valid_name(g) {
                        return Err(
                            cur.err(cur.column_of(rest), format!("invalid generator name '{g}'"))
                        );
                    }
                    p.generators.push(g.to_string());
                }
                symbols = p.symbols();
            }
            "alias" => {
                let (alias, gen) = split_assignment(&cur, rest)?;
                if p.index_of(gen).is_none() {
                    return Err(Error::Validation(format!(
                        "alias for undeclared generator {gen}"
                    )));
                }
                if !valid_name(alias) {
                    return Err(cur.err(cur.column_of(alias), format!("invalid alias '{alias}'")));
                }
                p.aliases.push((alias.to_string(), gen.to_string()));
                symbols = p.symbols();
            }
            "rel" => {
                let (lhs, rhs) = split_assignment(&cur, rest)?;
                let inner = lhs
                    .strip_prefix('[')
                    .and_then(|s| s.strip_suffix(']'))
                    .ok_or_else(|| cur.err(cur.column_of(lhs), "expected [x,y]"))?;
                let (x, y) = inner
                    .split_once(',')
                    .ok_or_else(|| cur.err(cur.column_of(lhs), "expected [x,y]"))?;
                let resolve_name = |n: &str| -> Result<String> {
                    let n = n.trim();
                    if p.index_of(n).is_some() {
                        return Ok(n.to_string());
                    }
                    p.aliases
                        .iter()
                        .find(|(a, _)| a == n)
                        .map(|(_, c)| c.clone())
                        .ok_or_else(|| {
                            Error::Validation(format!("relation uses undeclared generator {n}"))
                        })
                };
                let (x, y) = (resolve_name(x)?, resolve_name(y)?);
                let e = cur.expr(rhs, &symbols)?;
                p.add_relation(&x, &y, e)?;
            }
            "extra" => {
                let (lhs, rhs) = split_assignment(&cur, rest)?;
                let word = parse_word(&cur, lhs, &symbols)?;
                let e = cur.expr(rhs, &symbols)?;
                p.extra.push(ExtraRule { word, rhs: e });
            }
            "coproduct" | "counit" | "antipode" => {
                let (lhs, rhs) = split_assignment(&cur, rest)?;
                let gen = parse_word(&cur, lhs, &symbols)?;
                if gen.len() != 1 {
                    return Err(cur.err(cur.column_of(lhs), "expected a single generator"));
                }
                let e = cur.expr(rhs, &symbols)?;
                let hopf = p.hopf.get_or_insert_with(HopfSpec::default);
                let map = match keyword {
                    "coproduct" => &mut hopf.coproduct,
                    "counit" => &mut hopf.counit,
                    _ => &mut hopf.antipode,
                };
                if map.insert(gen[0].clone(), e).is_some() {
                    return Err(Error::Validation(format!(
                        "duplicate {keyword} for {}",
                        gen[0]
                    )));
                }
            }
            "central" => {
                for g in rest.split_whitespace() {
                    if p.index_of(g).is_none() {
                        return Err(Error::Validation(format!(
                            "central generator {g} undeclared"
                        )));
                    }
                    p.central.push(g.to_string());
                }
            }
            "note" => {
                let (target, text) = rest.split_once(':').ok_or_else(|| {
                    cur.err(cur.column_of(rest), "expected 'note <target> : <text>'")
                })?;
                p.annotations.push(Annotation {
                    target: target.trim().to_string(),
                    text: text.trim().to_string(),
                });
            }
            "scaling" => {
                let spec = parse_scaling_block(rest, &mut lines, resolve, &cur)?;
                p.scalings.push(spec);
            }
            other => {
                return Err(cur.err(1, format!("unknown keyword '{other}'")));
            }
        }
    }
    if !saw_algebra && p.scalings.is_empty() {
        return Err(Error::parse(1, 1, "missing 'algebra <name>' line"));
    }
    if saw_algebra {
        if p.generators.is_empty() {
            return Err(Error::Validation("no generators declared".into()));
        }
        if let Some(h) = &p.hopf {
            if h.is_empty() {
                p.hopf = None;
            }
        }
        p.validate()?;
    }
    Ok(p)
}

fn parse_scaling_block<'a, I>(
    name: &str,
    lines: &mut std::iter::Peekable<I>,
    resolve: &dyn Fn(&str) -> Option<Presentation>,
    opener: &LineCursor<'_>,
) -> Result<ScalingSpec>
where
    I: Iterator<Item = (usize, &'a str)>,
{
    if name.is_empty() {
        return Err(opener.err(1, "missing scaling name"));
    }
    let mut spec = ScalingSpec {
        name: name.to_string(),
        ..ScalingSpec::default()
    };
    let mut source_symbols: Option<SymbolTable> = None;
    let mut target_symbols: Option<SymbolTable> = None;
    for (idx, raw) in lines.by_ref() {
        let cur = LineCursor {
            number: idx + 1,
            text: raw,
        };
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (keyword, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        let rest = rest.trim();
        match keyword {
            "end" => {
                if spec.source.is_empty() || spec.target.is_empty() {
                    return Err(cur.err(1, "scaling block needs 'source' and 'target'"));
                }
                return Ok(spec);
            }
            "source" => {
                let src = resolve(rest)
                    .ok_or_else(|| Error::UnknownName(format!("source presentation {rest}")))?;
                spec.source = rest.to_string();
                source_symbols = Some(src.symbols());
            }
            "target" => {
                let tgt = resolve(rest)
                    .ok_or_else(|| Error::UnknownName(format!("target presentation {rest}")))?;
                spec.target = rest.to_string();
                target_symbols = Some(tgt.symbols());
            }
            "extend" => {
                if !valid_name(rest) {
                    return Err(cur.err(cur.column_of(rest), format!("invalid name '{rest}'")));
                }
                let symbols = source_symbols
                    .as_mut()
                    .ok_or_else(|| cur.err(1, "'source' must precede 'extend'"))?;
                symbols.add(rest, rest);
                spec.extensions.push(Extension {
                    name: rest.to_string(),
                    coproduct: None,
                    counit: None,
                    antipode: None,
                });
            }
            "coproduct" | "counit" | "antipode" => {
                let (lhs, rhs) = split_assignment(&cur, rest)?;
                let symbols = source_symbols
                    .as_ref()
                    .ok_or_else(|| cur.err(1, "'source' must come first"))?;
                let e = cur.expr(rhs, symbols)?;
                let ext = spec
                    .extensions
                    .iter_mut()
                    .find(|x| x.name == lhs)
                    .ok_or_else(|| {
                        Error::Validation(format!("Hopf data for undeclared extension {lhs}"))
                    })?;
                let slot = match keyword {
                    "coproduct" => &mut ext.coproduct,
                    "counit" => &mut ext.counit,
                    _ => &mut ext.antipode,
                };
                *slot = Some(e);
            }
            "map" => {
                let (lhs, rhs) = split_assignment(&cur, rest)?;
                let symbols = source_symbols
                    .as_ref()
                    .ok_or_else(|| cur.err(1, "'source' must come first"))?;
                if target_symbols.is_none() {
                    return Err(cur.err(1, "'target' must precede 'map'"));
                }
                let e = cur.expr(rhs, symbols)?;
                spec.assignments.push((lhs.to_string(), e));
            }
            "renorm" => {
                let mut parts = rest.split_whitespace();
                let (Some(name), Some(power), None) = (parts.next(), parts.next(), parts.next())
                else {
                    return Err(cur.err(1, "expected 'renorm <element> <power>'"));
                };
                let power: i32 = power
                    .parse()
                    .map_err(|_| cur.err(cur.column_of(rest), "renorm power must be an integer"))?;
                spec.renorm.push((name.to_string(), power));
            }
            other => return Err(cur.err(1, format!("unknown scaling keyword '{other}'"))),
        }
    }
    Err(opener.err(1, format!("scaling block '{name}' is missing 'end'")))
}

/// Parses a presentation file; scaling sources resolve to built-ins.
pub fn load_presentation(source: &str) -> Result<Presentation> {
    load_presentation_with(source, &|name| crate::builtin::builtin(name).ok())
}

pub fn save_presentation(p: &Presentation) -> String {
    let mut out = String::new();
    if !p.name.is_empty() || !p.generators.is_empty() {
        let _ = writeln!(out, "algebra {}", p.name);
        let _ = writeln!(out, "params h{}", if p.uses_eps { " eps" } else { "" });
        let _ = writeln!(out, "gens {}", p.generators.join(" < "));
    }
    for (alias, gen) in &p.aliases {
        let _ = writeln!(out, "alias {alias} = {gen}");
    }
    for r in &p.relations {
        let _ = writeln!(out, "rel [{},{}] = {}", r.left, r.right, r.rhs);
    }
    for x in &p.extra {
        let _ = writeln!(out, "extra {} = {}", x.label(), x.rhs);
    }
    if let Some(h) = &p.hopf {
        for g in &p.generators {
            if let Some(e) = h.coproduct.get(g) {
                let _ = writeln!(out, "coproduct {g} = {e}");
            }
        }
        for g in &p.generators {
            if let Some(e) = h.counit.get(g) {
                let _ = writeln!(out, "counit {g} = {e}");
            }
        }
        for g in &p.generators {
            if let Some(e) = h.antipode.get(g) {
                let _ = writeln!(out, "antipode {g} = {e}");
            }
        }
    }
    if !p.central.is_empty() {
        let _ = writeln!(out, "central {}", p.central.join(" "));
    }
    for a in &p.annotations {
        let _ = writeln!(out, "note {} : {}", a.target, a.text);
    }
    for s in &p.scalings {
        let _ = writeln!(out, "scaling {}", s.name);
        let _ = writeln!(out, "  source {}", s.source);
        let _ = writeln!(out, "  target {}", s.target);
        for x in &s.extensions {
            let _ = writeln!(out, "  extend {}", x.name);
            if let Some(e) = &x.coproduct {
                let _ = writeln!(out, "  coproduct {} = {e}", x.name);
            }
            if let Some(e) = &x.counit {
                let _ = writeln!(out, "  counit {} = {e}", x.name);
            }
            if let Some(e) = &x.antipode {
                let _ = writeln!(out, "  antipode {} = {e}", x.name);
            }
        }
        for (t, e) in &s.assignments {
            let _ = writeln!(out, "  map {t} = {e}");
        }
        for (n, k) in &s.renorm {
            let _ = writeln!(out, "  renorm {n} {k}");
        }
        let _ = writeln!(out, "end");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const SMALL: &str = "\
algebra toy
params h
gens x < y
rel [x,y] = h*x
coproduct x = x@1 + 1@x
coproduct y = y@1 + 1@y
counit x = 0
counit y = 0
antipode x = -x
antipode y = -y
";

    #[test]
    fn relation_orientation_is_normalized() {
        let p = load_presentation(SMALL).unwrap();
        assert_eq!(p.relations.len(), 1);
        assert_eq!(p.relations[0].label(), "[y,x]");
        assert_eq!(p.relations[0].rhs.to_string(), "-h*x");
    }

    #[test]
    fn round_trip() {
        let p = load_presentation(SMALL).unwrap();
        let text = save_presentation(&p);
        assert_eq!(load_presentation(&text).unwrap(), p);
    }

    #[test]
    fn undeclared_generator_is_a_validation_error() {
        let bad = "algebra t\nparams h\ngens x < y\nrel [y,x] = z\n";
        assert!(matches!(
            load_presentation(bad),
            Err(Error::UnknownSymbol(_))
        ));
        let bad = "algebra t\nparams h\ngens x < y\nrel [y,w] = x\n";
        assert!(matches!(load_presentation(bad), Err(Error::Validation(_))));
    }

    #[test]
    fn parse_errors_carry_positions() {
        let bad = "algebra t\nparams h\ngens x < y\nrel [y,x] = x y\n";
        match load_presentation(bad) {
            Err(Error::Parse { line, column, .. }) => {
                assert_eq!(line, 4);
                assert_eq!(column, 15);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn incomplete_hopf_data_rejected() {
        let bad = "algebra t\nparams h\ngens x < y\ncoproduct x = x@1 + 1@x\n";
        assert!(matches!(load_presentation(bad), Err(Error::Validation(_))));
    }
}
