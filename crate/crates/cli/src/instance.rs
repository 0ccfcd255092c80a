//! The line-oriented instance file format.
//!
//! ```text
//! dim: 3
//! sqrt: 2
//! subspace: (0, 1, 1*sqrt(2)) = 0
//! f: (1/2, 0, 0)
//! gauge: (-4, -4, 0)
//! gauge: (4, -4, 0)
//! box: -10..10
//! ```
//!
//! Sections may repeat where a list makes sense (`subspace`, `lattice`,
//! `body`, `gauge`, `rays`). Blank lines and lines starting with `#` are
//! ignored. Serialization writes sections in a fixed order.

use std::fmt::{self, Write as _};

use latcut_core::field::parse_scalar;
use latcut_core::lattice::{BoxRegion, Lattice};
use latcut_core::polyhedron::{AffineSubspace, HPolyhedron, Inequality};
use latcut_core::{QVector, Scalar};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InstanceError {
    Syntax { line: usize, column: usize, message: String },
    Semantic { line: Option<usize>, message: String },
}

impl fmt::Display for InstanceError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InstanceError::Syntax { line, column, message } => {
                write!(f, "syntax error at line {line}, column {column}: {message}")
            }
            InstanceError::Semantic { line: Some(l), message } => write!(f, "invalid instance at line {l}: {message}"),
            InstanceError::Semantic { line: None, message } => write!(f, "invalid instance: {message}"),
        }
    }
}

impl std::error::Error for InstanceError {}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

impl Relation {
    fn symbol(self) -> &'static str {
        match self {
            Relation::Le => "<=",
            Relation::Ge => ">=",
            Relation::Eq => "=",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Row {
    pub normal: QVector,
    pub relation: Relation,
    pub rhs: Scalar,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LatticeSpec {
    Integer,
    Generators(Vec<QVector>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    pub dim: usize,
    pub radicand: Option<u64>,
    pub subspace: Vec<(QVector, Scalar)>,
    pub anchor: Option<QVector>,
    pub lattice: LatticeSpec,
    pub body: Vec<Row>,
    pub gauge: Vec<QVector>,
    pub alpha: Option<Scalar>,
    pub rays: Vec<QVector>,
    pub area: Option<(QVector, QVector)>,
}

struct Line<'a> {
    number: usize,
    /// Byte offset of `value` within the line.
    offset: usize,
    value: &'a str,
}

impl Line<'_> {
    fn syntax(&self, at: usize, message: impl Into<String>) -> InstanceError {
        InstanceError::Syntax {
            line: self.number,
            column: self.offset + at + 1,
            message: message.into(),
        }
    }

    fn semantic(&self, message: impl Into<String>) -> InstanceError {
        InstanceError::Semantic {
            line: Some(self.number),
            message: message.into(),
        }
    }
}

fn scalar_at(line: &Line<'_>, text: &str, start: usize) -> Result<Scalar, InstanceError> {
    let lead = text.len() - text.trim_start().len();
    parse_scalar(text.trim()).map_err(|e| line.syntax(start + lead + e.offset, e.message))
}

/// Parses `(a, b, ...)` starting at byte `start` of the line value.
fn vector_at(line: &Line<'_>, text: &str, start: usize) -> Result<QVector, InstanceError> {
    let lead = text.len() - text.trim_start().len();
    let t = text.trim();
    let Some(inner) = t.strip_prefix('(').and_then(|r| r.strip_suffix(')')) else {
        return Err(line.syntax(start + lead, "expected a vector in parentheses"));
    };
    let base = start + lead + 1;
    if inner.trim().is_empty() {
        return Ok(QVector(Vec::new()));
    }
    let mut out = Vec::new();
    let mut pos = 0;
    for piece in inner.split(',') {
        if piece.trim().is_empty() {
            return Err(line.syntax(base + pos, "empty vector entry"));
        }
        out.push(scalar_at(line, piece, base + pos)?);
        pos += piece.len() + 1;
    }
    Ok(QVector(out))
}

/// Splits `lhs <op> rhs` at the relation symbol.
fn relation_split<'a>(line: &Line<'_>, text: &'a str) -> Result<(&'a str, Relation, &'a str, usize), InstanceError> {
    for (sym, rel) in [("<=", Relation::Le), (">=", Relation::Ge), ("=", Relation::Eq)] {
        if let Some(i) = text.find(sym) {
            return Ok((&text[..i], rel, &text[i + sym.len()..], i + sym.len()));
        }
    }
    Err(line.syntax(0, "expected `<=`, `>=` or `=`"))
}

fn row_at(line: &Line<'_>) -> Result<Row, InstanceError> {
    let (lhs, relation, rhs, at) = relation_split(line, line.value)?;
    Ok(Row {
        normal: vector_at(line, lhs, 0)?,
        relation,
        rhs: scalar_at(line, rhs, at)?,
    })
}

fn cube_bound(line: &Line<'_>, text: &str, start: usize) -> Result<Bound, InstanceError> {
    if text.trim_start().starts_with('(') {
        Ok(Bound::Vector(vector_at(line, text, start)?))
    } else {
        Ok(Bound::Scalar(scalar_at(line, text, start)?))
    }
}

enum Bound {
    Scalar(Scalar),
    Vector(QVector),
}

pub fn parse_instance(text: &str) -> Result<Instance, InstanceError> {
    let mut dim: Option<usize> = None;
    let mut radicand: Option<(u64, usize)> = None;
    let mut subspace = Vec::new();
    let mut anchor = None;
    let mut generators: Option<Vec<QVector>> = None;
    let mut integer_lattice = false;
    let mut body = Vec::new();
    let mut gauge = Vec::new();
    let mut alpha = None;
    let mut rays = Vec::new();
    let mut area_raw: Option<(Bound, Bound, usize)> = None;
    let mut vectors: Vec<(QVector, usize)> = Vec::new();
    let mut scalars: Vec<(Scalar, usize)> = Vec::new();

    for (i, raw) in text.lines().enumerate() {
        let number = i + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let Some(colon) = raw.find(':') else {
            return Err(InstanceError::Syntax {
                line: number,
                column: raw.len() - raw.trim_start().len() + 1,
                message: "expected `section: value`".into(),
            });
        };
        let key = raw[..colon].trim();
        let line = Line {
            number,
            offset: colon + 1,
            value: &raw[colon + 1..],
        };
        let once = |seen: bool| {
            if seen {
                Err(line.semantic(format!("section `{key}` given twice")))
            } else {
                Ok(())
            }
        };
        match key {
            "dim" => {
                once(dim.is_some())?;
                let v = line.value.trim();
                dim = Some(v.parse().map_err(|_| line.syntax(line.value.len() - line.value.trim_start().len(), "expected a nonnegative integer"))?);
            }
            "sqrt" => {
                once(radicand.is_some())?;
                let v = line.value.trim();
                let d: u64 = v.parse().map_err(|_| line.syntax(line.value.len() - line.value.trim_start().len(), "expected a square-free integer"))?;
                if d < 2 || !latcut_core::field::is_square_free(d) {
                    return Err(line.semantic(format!("{d} is not a square-free integer greater than 1")));
                }
                radicand = Some((d, number));
            }
            "subspace" => {
                let r = row_at(&line)?;
                if r.relation != Relation::Eq {
                    return Err(line.syntax(0, "subspace rows must be equations"));
                }
                vectors.push((r.normal.clone(), number));
                scalars.push((r.rhs.clone(), number));
                subspace.push((r.normal, r.rhs));
            }
            "f" => {
                once(anchor.is_some())?;
                let v = vector_at(&line, line.value, 0)?;
                vectors.push((v.clone(), number));
                anchor = Some(v);
            }
            "lattice" => {
                if line.value.trim() == "integer" {
                    once(integer_lattice || generators.is_some())?;
                    integer_lattice = true;
                } else {
                    if integer_lattice {
                        return Err(line.semantic("lattice given both as `integer` and by generators"));
                    }
                    let v = vector_at(&line, line.value, 0)?;
                    vectors.push((v.clone(), number));
                    generators.get_or_insert_with(Vec::new).push(v);
                }
            }
            "body" => {
                let r = row_at(&line)?;
                vectors.push((r.normal.clone(), number));
                scalars.push((r.rhs.clone(), number));
                body.push(r);
            }
            "gauge" => {
                let v = vector_at(&line, line.value, 0)?;
                vectors.push((v.clone(), number));
                gauge.push(v);
            }
            "alpha" => {
                once(alpha.is_some())?;
                let a = scalar_at(&line, line.value, 0)?;
                scalars.push((a.clone(), number));
                alpha = Some(a);
            }
            "rays" => {
                let v = vector_at(&line, line.value, 0)?;
                vectors.push((v.clone(), number));
                rays.push(v);
            }
            "box" => {
                once(area_raw.is_some())?;
                let Some(sep) = line.value.find("..") else {
                    return Err(line.syntax(0, "expected `lo..hi`"));
                };
                let lo = cube_bound(&line, &line.value[..sep], 0)?;
                let hi = cube_bound(&line, &line.value[sep + 2..], sep + 2)?;
                area_raw = Some((lo, hi, number));
            }
            other => {
                return Err(InstanceError::Syntax {
                    line: number,
                    column: raw.len() - raw.trim_start().len() + 1,
                    message: format!("unknown section `{other}`"),
                })
            }
        }
    }

    let dim = dim.ok_or(InstanceError::Semantic {
        line: None,
        message: "missing `dim` section".into(),
    })?;
    for (v, line) in &vectors {
        if v.dim() != dim {
            return Err(InstanceError::Semantic {
                line: Some(*line),
                message: format!("vector has {} entries, expected {dim}", v.dim()),
            });
        }
    }
    // One radicand for the whole file.
    let mut seen = radicand;
    let used = vectors
        .iter()
        .flat_map(|(v, l)| v.iter().map(move |x| (x.radicand(), *l)))
        .chain(scalars.iter().map(|(x, l)| (x.radicand(), *l)));
    for (d, line) in used {
        if d == 0 {
            continue;
        }
        match seen {
            None => seen = Some((d, line)),
            Some((e, _)) if e != d => {
                return Err(InstanceError::Semantic {
                    line: Some(line),
                    message: format!("mixed radicands sqrt({e}) and sqrt({d})"),
                })
            }
            _ => {}
        }
    }

    let area = match area_raw {
        None => None,
        Some((lo, hi, line)) => {
            let widen = |b: Bound| match b {
                Bound::Scalar(s) => Ok(QVector(vec![s; dim])),
                Bound::Vector(v) if v.dim() == dim => Ok(v),
                Bound::Vector(v) => Err(InstanceError::Semantic {
                    line: Some(line),
                    message: format!("box bound has {} entries, expected {dim}", v.dim()),
                }),
            };
            let (lo, hi) = (widen(lo)?, widen(hi)?);
            if lo.iter().zip(hi.iter()).any(|(a, b)| a > b) {
                return Err(InstanceError::Semantic {
                    line: Some(line),
                    message: "box lower bound exceeds upper bound".into(),
                });
            }
            if lo.iter().chain(hi.iter()).any(|x| !x.is_rational()) {
                return Err(InstanceError::Semantic {
                    line: Some(line),
                    message: "box bounds must be rational".into(),
                });
            }
            Some((lo, hi))
        }
    };

    Ok(Instance {
        dim,
        radicand: seen.map(|(d, _)| d),
        subspace,
        anchor,
        lattice: generators.map_or(LatticeSpec::Integer, LatticeSpec::Generators),
        body,
        gauge,
        alpha,
        rays,
        area,
    })
}

impl Instance {
    /// Canonical text: fixed section order, exact scalars.
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "dim: {}", self.dim);
        if let Some(d) = self.radicand {
            let _ = writeln!(out, "sqrt: {d}");
        }
        for (a, b) in &self.subspace {
            let _ = writeln!(out, "subspace: {a} = {b}");
        }
        if let Some(f) = &self.anchor {
            let _ = writeln!(out, "f: {f}");
        }
        if let LatticeSpec::Generators(gens) = &self.lattice {
            for g in gens {
                let _ = writeln!(out, "lattice: {g}");
            }
        }
        for r in &self.body {
            let _ = writeln!(out, "body: {} {} {}", r.normal, r.relation.symbol(), r.rhs);
        }
        for g in &self.gauge {
            let _ = writeln!(out, "gauge: {g}");
        }
        if let Some(a) = &self.alpha {
            let _ = writeln!(out, "alpha: {a}");
        }
        for r in &self.rays {
            let _ = writeln!(out, "rays: {r}");
        }
        if let Some((lo, hi)) = &self.area {
            let flat = |v: &QVector| v.iter().all(|x| x == &v[0]) && v.dim() > 0;
            if flat(lo) && flat(hi) {
                let _ = writeln!(out, "box: {}..{}", lo[0], hi[0]);
            } else {
                let _ = writeln!(out, "box: {lo}..{hi}");
            }
        }
        out
    }

    /// The affine space the bodies live in.
    pub fn space(&self) -> Result<AffineSubspace, InstanceError> {
        AffineSubspace::new(self.dim, self.subspace.clone()).map_err(|e| InstanceError::Semantic {
            line: None,
            message: format!("subspace equations: {e}"),
        })
    }

    pub fn lattice(&self) -> Result<Lattice, InstanceError> {
        match &self.lattice {
            LatticeSpec::Integer => Ok(Lattice::integer(self.dim)),
            LatticeSpec::Generators(g) => Lattice::new(self.dim, g.clone()).map_err(|e| InstanceError::Semantic {
                line: None,
                message: format!("lattice generators: {e}"),
            }),
        }
    }

    /// The body as a polyhedron of the space; `=` rows restrict its ambient.
    pub fn body(&self) -> Result<Option<HPolyhedron>, InstanceError> {
        if self.body.is_empty() {
            return Ok(None);
        }
        let space = self.space()?;
        let eqs: Vec<(QVector, Scalar)> = self
            .body
            .iter()
            .filter(|r| r.relation == Relation::Eq)
            .map(|r| (r.normal.clone(), r.rhs.clone()))
            .collect();
        let ambient = space.with_equations(&eqs).map_err(|e| InstanceError::Semantic {
            line: None,
            message: format!("body equations: {e}"),
        })?;
        let rows = self
            .body
            .iter()
            .filter_map(|r| match r.relation {
                Relation::Le => Some(Inequality::new(r.normal.clone(), r.rhs.clone())),
                Relation::Ge => Some(Inequality::new(r.normal.neg(), -&r.rhs)),
                Relation::Eq => None,
            })
            .collect();
        HPolyhedron::new(ambient, rows).map(Some).map_err(|e| InstanceError::Semantic {
            line: None,
            message: e.to_string(),
        })
    }

    pub fn area(&self) -> Option<BoxRegion> {
        self.area
            .as_ref()
            .map(|(lo, hi)| BoxRegion::new(lo.clone(), hi.clone()).expect("checked when parsed"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const EXAMPLE: &str = "dim: 3
sqrt: 2
subspace: (0, 1, 1*sqrt(2)) = 0
f: (1/2, 0, 0)
gauge: (-4, -4, 0)
gauge: (4, -4, 0)
alpha: 1
box: -10..10
";

    #[test]
    fn round_trip() {
        let inst = parse_instance(EXAMPLE).unwrap();
        assert_eq!(inst.gauge.len(), 2);
        assert_eq!(inst.radicand, Some(2));
        assert_eq!(inst.serialize(), EXAMPLE);
    }

    #[test]
    fn positions() {
        let err = parse_instance("dim: 2\nf: (1/2, 1/0)\n").unwrap_err();
        match err {
            InstanceError::Syntax { line, column, .. } => {
                assert_eq!(line, 2);
                assert!(column > 8, "column {column}");
            }
            other => panic!("{other:?}"),
        }
        let err = parse_instance("dim: 2\nbody: (1, 1*sqrt(2)) <= 1\nbody: (1*sqrt(3), 0) <= 1\n").unwrap_err();
        assert!(matches!(err, InstanceError::Semantic { line: Some(3), .. }));
        let err = parse_instance("dim: 2\nf: (1, 2, 3)\n").unwrap_err();
        assert!(matches!(err, InstanceError::Semantic { line: Some(2), .. }));
    }
}
