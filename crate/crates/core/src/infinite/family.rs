use serde::Deserialize;

use crate::expr::Expr;
use crate::graph::WeightedGraph;

use super::InfiniteError;

/// An infinite weighted graph on `Z` with line edges `(n, n+1)` and optional
/// chords `(k, −k)` for `k ≥ 1`, described by closed-form weight rules.
#[derive(Debug, Clone, PartialEq)]
pub struct LineFamily {
    pub name: String,
    /// `c(n, n+1)`
    pub edge_rule: Expr,
    /// `m(n)`
    pub mass_rule: Expr,
    /// `c(k, −k)` for `k ≥ 1`
    pub chord_rule: Option<Expr>,
}

#[derive(Debug, Deserialize)]
struct ChordSpec {
    #[serde(default)]
    enabled: bool,
    c: Option<String>,
}

#[derive(Debug, Deserialize)]
struct FamilyFile {
    name: Option<String>,
    c: String,
    #[serde(default)]
    m: Option<String>,
    #[serde(default)]
    chords: Option<ChordSpec>,
}

/// Names accepted by [`LineFamily::builtin`].
pub const BUILTIN_NAMES: &[&str] = &["simple-Z", "G1", "exponential", "G2"];

impl LineFamily {
    /// `simple-Z` (all weights 1), `G1` (`c(n,n+1) = (n+1)²+1`),
    /// `exponential` (`c(n,n+1) = α^|n|`, needs `α > 1`) and `G2` (`G1` plus
    /// unit chords `(k, −k)`). All have unit masses.
    pub fn builtin(name: &str, alpha: Option<f64>) -> Result<Self, InfiniteError> {
        let one = || Expr::constant(1.0);
        let parse = |s: &str| Expr::parse(s).expect("builtin rules parse");
        let family = match name.to_ascii_lowercase().as_str() {
            "simple-z" | "simple" | "z" => Self {
                name: "simple-Z".into(),
                edge_rule: one(),
                mass_rule: one(),
                chord_rule: None,
            },
            "g1" => Self {
                name: "G1".into(),
                edge_rule: parse("(n+1)^2 + 1"),
                mass_rule: one(),
                chord_rule: None,
            },
            "exponential" | "exp" => {
                let alpha = alpha.ok_or_else(|| {
                    InfiniteError::BadParameter("exponential needs --alpha > 1".into())
                })?;
                if !(alpha > 1.0) || !alpha.is_finite() {
                    return Err(InfiniteError::BadParameter(format!(
                        "exponential needs alpha > 1, got {alpha}"
                    )));
                }
                Self {
                    name: format!("exponential(alpha={alpha})"),
                    edge_rule: Expr::parse_with("alpha^abs(n)", &[("alpha", alpha)])
                        .expect("builtin rules parse"),
                    mass_rule: one(),
                    chord_rule: None,
                }
            }
            "g2" => Self {
                name: "G2".into(),
                edge_rule: parse("(n+1)^2 + 1"),
                mass_rule: one(),
                chord_rule: Some(one()),
            },
            _ => return Err(InfiniteError::UnknownFamily(name.to_string())),
        };
        Ok(family)
    }

    /// Parses a custom family file
    /// `{ "c": expr, "m": expr, "chords": {"enabled": bool, "c": expr} }`;
    /// `m` defaults to 1 and chords to disabled.
    pub fn from_json(text: &str, constants: &[(&str, f64)]) -> Result<Self, InfiniteError> {
        let file: FamilyFile =
            serde_json::from_str(text).map_err(|e| InfiniteError::Parse(e.to_string()))?;
        let edge_rule = Expr::parse_with(&file.c, constants)?;
        let mass_rule = match &file.m {
            Some(m) => Expr::parse_with(m, constants)?,
            None => Expr::constant(1.0),
        };
        let chord_rule = match file.chords {
            Some(ChordSpec { enabled: true, c }) => Some(match c {
                Some(c) => Expr::parse_with(&c, constants)?,
                None => Expr::constant(1.0),
            }),
            _ => None,
        };
        Ok(Self {
            name: file.name.unwrap_or_else(|| "custom".into()),
            edge_rule,
            mass_rule,
            chord_rule,
        })
    }

    pub fn has_chords(&self) -> bool {
        self.chord_rule.is_some()
    }

    fn checked(rule: &str, value: f64, n: i64) -> Result<f64, InfiniteError> {
        if value > 0.0 && value.is_finite() {
            Ok(value)
        } else {
            Err(InfiniteError::BadRuleValue {
                rule: rule.to_string(),
                n,
                value,
            })
        }
    }

    /// `c(n, n+1)`.
    pub fn conductance(&self, n: i64) -> Result<f64, InfiniteError> {
        Self::checked("c", self.edge_rule.eval(n), n)
    }

    /// `c(n, n+1)` without the positivity check; may be `inf` for rules that
    /// outgrow `f64`.
    pub fn conductance_unchecked(&self, n: i64) -> f64 {
        self.edge_rule.eval(n)
    }

    /// `m(n)`.
    pub fn mass(&self, n: i64) -> Result<f64, InfiniteError> {
        Self::checked("m", self.mass_rule.eval(n), n)
    }

    /// `c(k, −k)` for `k ≥ 1`, or `None` without chords.
    pub fn chord_conductance(&self, k: i64) -> Option<Result<f64, InfiniteError>> {
        self.chord_rule
            .as_ref()
            .map(|r| Self::checked("chord c", r.eval(k), k))
    }

    pub fn truncate(&self, radius: usize) -> Result<Truncation, InfiniteError> {
        Truncation::new(self, radius)
    }
}

/// The finite window `{−N, …, N}` of a [`LineFamily`] with every family edge
/// whose endpoints both lie in the window. Vertex `n` has index `n + N`;
/// line edge `(n, n+1)` has index `n + N`; chord `(k, −k)` has index
/// `2N + k − 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct Truncation {
    pub family: String,
    pub radius: usize,
    pub graph: WeightedGraph,
    /// Indices of the vertices `−N` and `N`.
    pub boundary: [usize; 2],
}

impl Truncation {
    fn new(fam: &LineFamily, radius: usize) -> Result<Self, InfiniteError> {
        if radius < 1 {
            return Err(InfiniteError::WindowTooSmall { radius, min: 1 });
        }
        let r = radius as i64;
        let ids: Vec<String> = (-r..=r).map(|n| n.to_string()).collect();
        let masses = (-r..=r).map(|n| fam.mass(n)).collect::<Result<Vec<_>, _>>()?;
        let mut edges = Vec::with_capacity(3 * radius);
        for n in -r..r {
            edges.push(((n + r) as usize, (n + 1 + r) as usize, fam.conductance(n)?));
        }
        if fam.has_chords() {
            for k in 1..=r {
                let c = fam.chord_conductance(k).expect("family has chords")?;
                edges.push(((k + r) as usize, (r - k) as usize, c));
            }
        }
        let graph = WeightedGraph::from_parts_with_ids(ids, masses, &edges)?;
        Ok(Self {
            family: fam.name.clone(),
            radius,
            graph,
            boundary: [0, 2 * radius],
        })
    }

    pub fn vertex(&self, n: i64) -> usize {
        debug_assert!(n.unsigned_abs() as usize <= self.radius);
        (n + self.radius as i64) as usize
    }

    /// Edge index of `(n, n+1)`.
    pub fn line_edge(&self, n: i64) -> usize {
        debug_assert!(n >= -(self.radius as i64) && n < self.radius as i64);
        (n + self.radius as i64) as usize
    }

    /// Edge index of the chord `(k, −k)`.
    pub fn chord_edge(&self, k: i64) -> usize {
        debug_assert!(k >= 1 && k as usize <= self.radius);
        2 * self.radius + k as usize - 1
    }

    /// Integer label of a vertex index.
    pub fn label(&self, v: usize) -> i64 {
        v as i64 - self.radius as i64
    }
}
