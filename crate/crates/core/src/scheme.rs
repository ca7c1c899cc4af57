//! Scheme models, their specialization posets, and chains `x_0 <= ... <= x_n`.
//!
//! Curves (`P^1`, `Spec Z`) have infinitely many closed points, so their
//! chains are described by patterns: a level-`n` chain on a curve is
//! `(x, ..., x, eta, ..., eta)` with `j` closed entries, and `j` determines
//! which factor ring the chain indexes. Finite posets are materialized.

use std::fmt;

use serde_json::{json, Value};

use crate::error::{AdeleError, Result};

/// Highest level carried by the arithmetic parts of the library.
pub const MAX_LEVEL: usize = 3;

/// Delete entry `i`.
pub fn face<T: Clone>(chain: &[T], i: usize) -> Result<Vec<T>> {
    if chain.len() < 2 || i >= chain.len() {
        return Err(AdeleError::IndexOutOfRange {
            index: i,
            level: chain.len().saturating_sub(1),
        });
    }
    let mut c = chain.to_vec();
    c.remove(i);
    Ok(c)
}

/// Repeat entry `i`.
pub fn degeneracy<T: Clone>(chain: &[T], i: usize) -> Result<Vec<T>> {
    if i >= chain.len() {
        return Err(AdeleError::IndexOutOfRange {
            index: i,
            level: chain.len().saturating_sub(1),
        });
    }
    let mut c = chain.to_vec();
    c.insert(i, chain[i].clone());
    Ok(c)
}

/// All order-preserving maps `[k] -> [n]`, as value tuples.
pub fn monotone_maps(k: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k + 1);
    fn rec(k: usize, n: usize, lo: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k + 1 {
            out.push(cur.clone());
            return;
        }
        for v in lo..=n {
            cur.push(v);
            rec(k, n, v, cur, out);
            cur.pop();
        }
    }
    rec(k, n, 0, &mut cur, &mut out);
    out
}

/// `sigma ∘ f` for a chain `sigma` and an order-preserving `f`.
pub fn precompose<T: Clone>(chain: &[T], f: &[usize]) -> Vec<T> {
    f.iter().map(|&i| chain[i].clone()).collect()
}

/// A partial order on `{0, ..., n-1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poset {
    leq: Vec<Vec<bool>>,
}

impl Poset {
    /// The reflexive-transitive closure of `pairs` (each `(a, b)` meaning
    /// `a <= b`); fails if the closure is not antisymmetric.
    pub fn from_relation(size: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let mut leq = vec![vec![false; size]; size];
        for (i, row) in leq.iter_mut().enumerate() {
            row[i] = true;
        }
        for &(a, b) in pairs {
            if a >= size || b >= size {
                return Err(AdeleError::InvalidInput(format!(
                    "relation pair ({a}, {b}) outside 0..{size}"
                )));
            }
            leq[a][b] = true;
        }
        for k in 0..size {
            for i in 0..size {
                if leq[i][k] {
                    for j in 0..size {
                        if leq[k][j] {
                            leq[i][j] = true;
                        }
                    }
                }
            }
        }
        for i in 0..size {
            for j in i + 1..size {
                if leq[i][j] && leq[j][i] {
                    return Err(AdeleError::NotPartialOrder(format!(
                        "{i} <= {j} and {j} <= {i}"
                    )));
                }
            }
        }
        Ok(Self { leq })
    }

    /// The total order `0 < 1 < ... < size-1`.
    pub fn total(size: usize) -> Self {
        let pairs: Vec<_> = (1..size).map(|i| (i - 1, i)).collect();
        Self::from_relation(size, &pairs).unwrap()
    }

    /// `size - 1` minimal points under one top element (a "fan"); the
    /// specialization poset of a curve with `size - 1` closed points.
    pub fn fan(size: usize) -> Self {
        let top = size - 1;
        let pairs: Vec<_> = (0..top).map(|i| (i, top)).collect();
        Self::from_relation(size, &pairs).unwrap()
    }

    pub fn size(&self) -> usize {
        self.leq.len()
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a][b]
    }

    /// Exhaustive check of reflexivity, antisymmetry and transitivity.
    pub fn is_partial_order(&self) -> bool {
        let n = self.size();
        (0..n).all(|i| self.leq[i][i])
            && (0..n).all(|i| (0..n).all(|j| i == j || !(self.leq[i][j] && self.leq[j][i])))
            && (0..n).all(|i| {
                (0..n).all(|j| (0..n).all(|k| !(self.leq[i][j] && self.leq[j][k]) || self.leq[i][k]))
            })
    }

    pub fn maximum(&self) -> Option<usize> {
        (0..self.size()).find(|&m| (0..self.size()).all(|x| self.leq[x][m]))
    }

    /// The generating pairs `a < b` (all strict relations).
    pub fn relation_pairs(&self) -> Vec<(usize, usize)> {
        let n = self.size();
        let mut out = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if a != b && self.leq[a][b] {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// All weakly increasing chains of length `level + 1`, lexicographic.
    pub fn chains(&self, level: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(level + 1);
        self.extend_chains(level + 1, &mut cur, &mut out);
        out
    }

    fn extend_chains(&self, len: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        for x in 0..self.size() {
            if cur.last().is_none_or(|&l| self.leq[l][x]) {
                cur.push(x);
                self.extend_chains(len, cur, out);
                cur.pop();
            }
        }
    }

    pub fn is_chain(&self, c: &[usize]) -> bool {
        c.iter().all(|&x| x < self.size()) && c.windows(2).all(|w| self.leq[w[0]][w[1]])
    }

    /// `h_{n, alpha}`: keep the entries where `alpha = 0`, replace the rest
    /// by `eta`.
    pub fn contract_chain(&self, chain: &[usize], alpha: &[usize], eta: usize) -> Result<Vec<usize>> {
        check_alpha(chain.len(), alpha)?;
        if let Some(&x) = chain.iter().find(|&&x| !self.leq(x, eta)) {
            return Err(AdeleError::NotUpperBound(format!("{eta} (fails against {x})")));
        }
        Ok(chain
            .iter()
            .zip(alpha)
            .map(|(&x, &a)| if a == 0 { x } else { eta })
            .collect())
    }
}

fn check_alpha(len: usize, alpha: &[usize]) -> Result<()> {
    if alpha.len() != len || alpha.iter().any(|&a| a > 1) || alpha.windows(2).any(|w| w[0] > w[1]) {
        return Err(AdeleError::InvalidInput(format!(
            "{alpha:?} is not an order-preserving map [{}] -> [1]",
            len.saturating_sub(1)
        )));
    }
    Ok(())
}

/// The factor ring a curve chain pattern indexes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PatternRing {
    /// `F`, chains `(eta, ..., eta)`.
    Rational,
    /// `prod' F_x`, chains containing both `x` and `eta`.
    Adelic,
    /// `prod O_x`, chains `(x, ..., x)`.
    Integral,
}

/// The curve chain `(x^j, eta^(n+1-j))` at level `n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CurvePattern {
    pub level: usize,
    pub closed: usize,
}

impl fmt::Display for CurvePattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<&str> = (0..=self.level)
            .map(|i| if i < self.closed { "x" } else { "eta" })
            .collect();
        write!(f, "({})", parts.join(","))
    }
}

impl CurvePattern {
    pub fn new(level: usize, closed: usize) -> Result<Self> {
        if closed > level + 1 {
            return Err(AdeleError::IndexOutOfRange { index: closed, level });
        }
        Ok(Self { level, closed })
    }

    /// All patterns at `level`, in the order used for component storage.
    pub fn all(level: usize) -> Vec<Self> {
        (0..=level + 1).map(|closed| Self { level, closed }).collect()
    }

    pub fn parse(s: &str) -> Result<Self> {
        let inner = s
            .trim()
            .strip_prefix('(')
            .and_then(|x| x.strip_suffix(')'))
            .ok_or_else(|| AdeleError::Parse(format!("bad pattern `{s}`")))?;
        let parts: Vec<&str> = inner.split(',').map(str::trim).collect();
        let closed = parts.iter().take_while(|p| **p == "x").count();
        if parts[closed..].iter().any(|p| *p != "eta") {
            return Err(AdeleError::Parse(format!("bad pattern `{s}`")));
        }
        Ok(Self {
            level: parts.len() - 1,
            closed,
        })
    }

    pub fn ring(&self) -> PatternRing {
        if self.closed == 0 {
            PatternRing::Rational
        } else if self.closed == self.level + 1 {
            PatternRing::Integral
        } else {
            PatternRing::Adelic
        }
    }

    pub fn is_degenerate(&self) -> bool {
        self.closed > 1 || self.level + 1 - self.closed > 1
    }

    /// The underlying strictly increasing chain: `(x)`, `(eta)` or `(x<eta)`.
    pub fn support(&self) -> &'static str {
        match self.ring() {
            PatternRing::Rational => "(eta)",
            PatternRing::Integral => "(x)",
            PatternRing::Adelic => "(x<eta)",
        }
    }

    pub fn face(&self, i: usize) -> Result<Self> {
        if self.level == 0 || i > self.level {
            return Err(AdeleError::IndexOutOfRange {
                index: i,
                level: self.level,
            });
        }
        let closed = if i < self.closed { self.closed - 1 } else { self.closed };
        Ok(Self {
            level: self.level - 1,
            closed,
        })
    }

    pub fn degeneracy(&self, i: usize) -> Result<Self> {
        if i > self.level {
            return Err(AdeleError::IndexOutOfRange {
                index: i,
                level: self.level,
            });
        }
        let closed = if i < self.closed { self.closed + 1 } else { self.closed };
        Ok(Self {
            level: self.level + 1,
            closed,
        })
    }

    /// `sigma ∘ f` for an order-preserving `f: [k] -> [level]`.
    pub fn precompose(&self, f: &[usize]) -> Self {
        Self {
            level: f.len() - 1,
            closed: f.iter().filter(|&&i| i < self.closed).count(),
        }
    }

    /// `h_{n, alpha}` with `eta` the generic point.
    pub fn contract(&self, alpha: &[usize]) -> Result<Self> {
        check_alpha(self.level + 1, alpha)?;
        let kept = alpha.iter().filter(|&&a| a == 0).count();
        Ok(Self {
            level: self.level,
            closed: self.closed.min(kept),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ChainType {
    Pattern(CurvePattern),
    Chain(Vec<usize>),
}

impl fmt::Display for ChainType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Pattern(p) => write!(f, "{p}"),
            Self::Chain(c) => {
                let parts: Vec<String> = c.iter().map(|x| x.to_string()).collect();
                write!(f, "({})", parts.join(","))
            }
        }
    }
}

impl ChainType {
    pub fn level(&self) -> usize {
        match self {
            Self::Pattern(p) => p.level,
            Self::Chain(c) => c.len() - 1,
        }
    }

    pub fn face(&self, i: usize) -> Result<Self> {
        Ok(match self {
            Self::Pattern(p) => Self::Pattern(p.face(i)?),
            Self::Chain(c) => Self::Chain(face(c, i)?),
        })
    }

    pub fn degeneracy(&self, i: usize) -> Result<Self> {
        Ok(match self {
            Self::Pattern(p) => Self::Pattern(p.degeneracy(i)?),
            Self::Chain(c) => Self::Chain(degeneracy(c, i)?),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SchemeModel {
    /// `P^1` over `F_p` (`characteristic > 0`) or `Q` (`characteristic = 0`).
    P1 { characteristic: u64 },
    /// `Spec Z`.
    SpecZ,
    FinitePoset(Poset),
}

impl SchemeModel {
    pub fn dimension(&self) -> usize {
        match self {
            Self::P1 { .. } | Self::SpecZ => 1,
            Self::FinitePoset(p) => {
                // longest strict chain
                let n = p.size();
                let mut best = vec![0usize; n];
                let mut order: Vec<usize> = (0..n).collect();
                order.sort_by_key(|&x| (0..n).filter(|&y| p.leq(y, x)).count());
                for &x in &order {
                    for y in 0..n {
                        if y != x && p.leq(y, x) {
                            best[x] = best[x].max(best[y] + 1);
                        }
                    }
                }
                best.into_iter().max().unwrap_or(0)
            }
        }
    }

    /// Every chain type at level `n`: curve patterns, or materialized chains.
    pub fn chain_types(&self, n: i64) -> Result<Vec<ChainType>> {
        if n < 0 {
            return Err(AdeleError::UnsupportedLevel(n));
        }
        let n = n as usize;
        Ok(match self {
            Self::P1 { .. } | Self::SpecZ => {
                CurvePattern::all(n).into_iter().map(ChainType::Pattern).collect()
            }
            Self::FinitePoset(p) => p.chains(n).into_iter().map(ChainType::Chain).collect(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let kind = v
            .get("kind")
            .and_then(Value::as_str)
            .ok_or_else(|| AdeleError::Parse("model descriptor needs a `kind`".into()))?;
        match kind {
            "P1" => {
                let field = v
                    .get("field")
                    .ok_or_else(|| AdeleError::Parse("P1 model needs a `field`".into()))?;
                let ch = field.get("char").and_then(Value::as_u64).unwrap_or(0);
                let deg = field.get("degree").and_then(Value::as_u64).unwrap_or(1);
                if deg != 1 {
                    return Err(AdeleError::Unsupported(format!(
                        "base field of degree {deg} over the prime field"
                    )));
                }
                Ok(Self::P1 { characteristic: ch })
            }
            "SpecZ" => Ok(Self::SpecZ),
            "FinitePoset" => {
                let rel = v
                    .get("relation")
                    .and_then(Value::as_array)
                    .ok_or_else(|| AdeleError::Parse("FinitePoset needs a `relation`".into()))?;
                let mut pairs = Vec::new();
                for r in rel {
                    let a = r.get(0).and_then(Value::as_u64);
                    let b = r.get(1).and_then(Value::as_u64);
                    match (a, b) {
                        (Some(a), Some(b)) => pairs.push((a as usize, b as usize)),
                        _ => return Err(AdeleError::Parse(format!("bad relation pair {r}"))),
                    }
                }
                let size = v
                    .get("size")
                    .and_then(Value::as_u64)
                    .map(|s| s as usize)
                    .unwrap_or_else(|| pairs.iter().map(|&(a, b)| a.max(b) + 1).max().unwrap_or(1));
                Ok(Self::FinitePoset(Poset::from_relation(size, &pairs)?))
            }
            other => Err(AdeleError::Parse(format!("unknown model kind `{other}`"))),
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            Self::P1 { characteristic } => {
                json!({"kind": "P1", "field": {"char": characteristic, "degree": 1}})
            }
            Self::SpecZ => json!({"kind": "SpecZ"}),
            Self::FinitePoset(p) => {
                let rel: Vec<Value> = p.relation_pairs().iter().map(|&(a, b)| json!([a, b])).collect();
                json!({"kind": "FinitePoset", "size": p.size(), "relation": rel})
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn curve_level_zero_and_one() {
        let m = SchemeModel::P1 { characteristic: 5 };
        let l0: Vec<String> = m.chain_types(0).unwrap().iter().map(|c| c.to_string()).collect();
        assert_eq!(l0, vec!["(eta)", "(x)"]);
        let supports: Vec<&str> = CurvePattern::all(1).iter().map(|p| p.support()).collect();
        assert_eq!(supports, vec!["(eta)", "(x<eta)", "(x)"]);
        assert!(m.chain_types(-1).is_err());
    }

    #[test]
    fn singleton_poset_has_one_chain_per_level() {
        let m = SchemeModel::FinitePoset(Poset::total(1));
        assert_eq!(m.chain_types(2).unwrap(), vec![ChainType::Chain(vec![0, 0, 0])]);
    }

    #[test]
    fn face_and_degeneracy_examples() {
        let xe = CurvePattern::new(1, 1).unwrap();
        assert_eq!(xe.face(0).unwrap().to_string(), "(eta)");
        assert_eq!(xe.degeneracy(1).unwrap().to_string(), "(x,eta,eta)");
        assert!(xe.face(2).is_err());
        assert_eq!(CurvePattern::parse("(x,x,eta)").unwrap(), CurvePattern::new(2, 2).unwrap());
    }

    #[test]
    fn antisymmetry_is_enforced() {
        assert!(matches!(
            Poset::from_relation(3, &[(0, 1), (1, 2), (2, 0)]),
            Err(AdeleError::NotPartialOrder(_))
        ));
        let p = Poset::from_relation(4, &[(0, 1), (1, 3), (2, 3)]).unwrap();
        assert!(p.leq(0, 3));
        assert!(p.is_partial_order());
        assert_eq!(p.maximum(), Some(3));
    }

    #[test]
    fn contraction_examples() {
        // x=0 < y=1 < eta=2
        let p = Poset::total(3);
        assert_eq!(p.contract_chain(&[0, 1, 2], &[0, 0, 1], 2).unwrap(), vec![0, 1, 2]);
        assert_eq!(p.contract_chain(&[0, 1], &[0, 0], 2).unwrap(), vec![0, 1]);
        assert_eq!(p.contract_chain(&[0, 1], &[1, 1], 2).unwrap(), vec![2, 2]);
        assert!(matches!(p.contract_chain(&[0, 2], &[0, 1], 1), Err(AdeleError::NotUpperBound(_))));
        assert!(p.contract_chain(&[0, 1], &[1, 0], 2).is_err());
    }

    #[test]
    fn descriptor_roundtrip() {
        let v: Value = serde_json::from_str(r#"{"kind":"FinitePoset","relation":[[0,1],[1,2]]}"#).unwrap();
        let m = SchemeModel::from_json(&v).unwrap();
        assert_eq!(m.dimension(), 2);
        assert_eq!(SchemeModel::from_json(&m.to_json()).unwrap(), m);
        let p1: Value = serde_json::from_str(r#"{"kind":"P1","field":{"char":5,"degree":1}}"#).unwrap();
        assert_eq!(SchemeModel::from_json(&p1).unwrap(), SchemeModel::P1 { characteristic: 5 });
    }
}
