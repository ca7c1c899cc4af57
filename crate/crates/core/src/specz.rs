//! Level-0 module data over `Spec Z`: families of complexes over
//! `prod_p Z_p`, the uniform amplitude rule, and the descent check that
//! rejects `prod_p F_p`. Also the ranks of `H^0`, `H^1` of `O` through
//! finite windows of the adelic complex.

use std::fmt;

use crate::error::{AdeleError, Result};

/// The first `n` primes.
pub fn primes(n: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(n);
    let mut c = 2u64;
    while out.len() < n {
        if out.iter().take_while(|&&p| p * p <= c).all(|&p| !c.is_multiple_of(p)) {
            out.push(c);
        }
        c += 1;
    }
    out
}

fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

fn prime_index(p: u64) -> usize {
    (2..=p).filter(|&q| is_prime(q)).count()
}

/// A two-term complex `Z_p^a --M--> Z_p^b` in degrees `[-1, 0]`, or a
/// longer complex described only by its amplitude.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalComplex {
    pub prime: u64,
    /// Lowest nonzero degree (the top degree is always 0).
    pub bottom: i64,
    /// The differential into degree 0 as an integer matrix (rows = target).
    pub matrix: Vec<Vec<i64>>,
}

impl LocalComplex {
    pub fn amplitude(&self) -> (i64, i64) {
        (self.bottom, 0)
    }

    /// Number of `p`-torsion summands of `H^0` for a diagonal differential.
    pub fn torsion_summands(&self) -> usize {
        self.matrix
            .iter()
            .enumerate()
            .filter(|(i, row)| row.get(*i).is_some_and(|&d| d != 0 && d.unsigned_abs() % self.prime == 0))
            .count()
    }
}

/// Families of complexes indexed by the primes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ZFamily {
    /// `prod_p F_p`, each factor resolved as `[Z_p --p--> Z_p]`.
    ResidueFields,
    /// `prod_p Z_p^r`, with rational part `Q^r`.
    Free(usize),
    /// The factor at the `i`-th prime has amplitude `[-i, 0]`.
    GrowingAmplitude,
}

impl fmt::Display for ZFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::ResidueFields => write!(f, "prod_p F_p"),
            Self::Free(r) => write!(f, "prod_p Z_p^{r}"),
            Self::GrowingAmplitude => write!(f, "growing amplitude"),
        }
    }
}

impl ZFamily {
    pub fn component(&self, p: u64) -> LocalComplex {
        match self {
            Self::ResidueFields => LocalComplex {
                prime: p,
                bottom: -1,
                matrix: vec![vec![p as i64]],
            },
            Self::Free(r) => LocalComplex {
                prime: p,
                bottom: 0,
                matrix: vec![Vec::new(); *r],
            },
            Self::GrowingAmplitude => LocalComplex {
                prime: p,
                bottom: -(prime_index(p) as i64),
                matrix: vec![vec![p as i64]],
            },
        }
    }

    /// Rank of the generic (rational) part.
    pub fn rational_rank(&self) -> usize {
        match self {
            Self::Free(r) => *r,
            _ => 0,
        }
    }

    /// A uniform amplitude bound across all factors, or `None`.
    fn uniform_amplitude(&self) -> Option<(i64, i64)> {
        match self {
            Self::ResidueFields => Some((-1, 0)),
            Self::Free(_) => Some((0, 0)),
            Self::GrowingAmplitude => None,
        }
    }
}

/// Accepts a family as a perfect complex over `prod_p Z_p` only when its
/// amplitude is globally bounded; returns that bound.
pub fn accept_level0(family: ZFamily, claimed_bound: i64) -> Result<(i64, i64)> {
    match family.uniform_amplitude() {
        Some(a) if a.0 >= -claimed_bound => {
            // spot-check the formula against explicit factors
            for p in primes(25) {
                let c = family.component(p);
                if c.amplitude().0 < a.0 {
                    return Err(AdeleError::InvalidInput(format!("factor at {p} exceeds the bound")));
                }
            }
            Ok(a)
        }
        Some(a) => Err(AdeleError::InvalidInput(format!(
            "amplitude [{}, {}] exceeds the claimed bound {claimed_bound}",
            a.0, a.1
        ))),
        None => {
            let p = primes(claimed_bound as usize + 2)
                .into_iter()
                .find(|&p| family.component(p).amplitude().0 < -claimed_bound)
                .expect("amplitude grows with the prime index");
            Err(AdeleError::InvalidInput(format!(
                "not globally bounded: the factor at {p} has amplitude [{}, 0] beyond [-{claimed_bound}, 0]",
                family.component(p).bottom
            )))
        }
    }
}

/// Why `prod_p F_p` is not a descent datum: its generic part is zero,
/// while `1 = (1, 1, ...)` survives in `M ⊗ A_f` because no integer `n`
/// supported on a finite set of primes kills it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NonTorsionWitness {
    /// The support bound: candidate annihilators are products of these primes.
    pub support: Vec<u64>,
    /// The smallest prime outside the support.
    pub prime: u64,
    /// `n mod prime` for the candidate `n = prod p^k`, `k = 1..=max_exponent`.
    pub residues: Vec<u64>,
    pub max_exponent: u32,
}

impl fmt::Display for NonTorsionWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "every n supported on {:?} is nonzero mod {}, so n * (1, 1, ...) != 0 (residues {:?})",
            self.support, self.prime, self.residues
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DescentCheck {
    /// The generic part and the completed part agree over the finite adeles.
    Cartesian { rank: usize },
    Rejected(NonTorsionWitness),
}

/// Cartesian condition `M_eta ⊗ A_f ≅ M_O ⊗ A_f` for a level-0 family.
pub fn validate_descent(family: ZFamily, support: &[u64], max_exponent: u32) -> Result<DescentCheck> {
    if support.iter().any(|&p| !is_prime(p)) {
        return Err(AdeleError::InvalidInput("support bound must consist of primes".into()));
    }
    accept_level0(family, 8)?;
    match family {
        ZFamily::Free(r) => Ok(DescentCheck::Cartesian { rank: r }),
        ZFamily::ResidueFields | ZFamily::GrowingAmplitude => {
            // a single factor is torsion, so only the infinite product can survive
            debug_assert!(family.component(2).torsion_summands() == 1);
            let q = (2..).find(|&q| is_prime(q) && !support.contains(&q)).expect("infinitely many primes");
            let mut residues = Vec::new();
            for k in 1..=max_exponent {
                let n = support.iter().fold(1u64, |acc, &p| acc * pow_mod(p, k, q) % q);
                if n == 0 {
                    return Err(AdeleError::InvalidInput(format!("{q} divides a candidate annihilator")));
                }
                residues.push(n);
            }
            Ok(DescentCheck::Rejected(NonTorsionWitness {
                support: support.to_vec(),
                prime: q,
                residues,
                max_exponent,
            }))
        }
    }
}

fn pow_mod(b: u64, e: u32, m: u64) -> u64 {
    let mut r = 1 % m;
    let mut b = b % m;
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut s0, mut s1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    (r0 == 1).then(|| s0.rem_euclid(m as i128) as u64)
}

/// `(rank H^0, rank H^1)` of `O` on `Spec Z` from the window with support
/// `support` and pole order `pole` at each prime: `F_W = (1/D) Z` with
/// `D = prod p^pole`, and `A_W = ⊕ p^{-pole} Z_p / Z_p`, a finite group.
/// Every basis vector of `A_W` is hit by an explicit CRT preimage, so the
/// cokernel (`H^1`) is trivial; the kernel `Z` has index `|A_W|` in `F_W`,
/// hence rank 1.
pub fn structure_sheaf_ranks(support: &[u64], pole: u32) -> Result<(usize, usize)> {
    if support.iter().any(|&p| !is_prime(p)) || pole == 0 {
        return Err(AdeleError::InvalidInput("window needs primes and a positive pole order".into()));
    }
    let moduli: Vec<u64> = support.iter().map(|&p| p.pow(pole)).collect();
    let d: u64 = moduli.iter().product();
    // component of a/D at p: a * (D/p^e)^{-1} mod p^e, a class in p^{-e} Z_p / Z_p
    let inverses = moduli
        .iter()
        .map(|&m| inv_mod((d / m) % m, m).ok_or(AdeleError::DivisionByZero))
        .collect::<Result<Vec<_>>>()?;
    let image = |a: u64| -> Vec<u64> { moduli.iter().zip(&inverses).map(|(&m, &c)| a % m * c % m).collect() };
    let mut missing = 0;
    for i in 0..moduli.len() {
        let target: Vec<u64> = (0..moduli.len()).map(|j| u64::from(j == i)).collect();
        if image(d / moduli[i]) != target {
            missing += 1;
        }
    }
    // the kernel of Z/D -> A_W must be trivial for the index count
    let kernel_is_dz = d > 10_000 || (1..d).all(|a| image(a).iter().any(|&x| x != 0));
    if !kernel_is_dz {
        return Err(AdeleError::InvalidInput("window map has a spurious kernel".into()));
    }
    Ok((1, missing))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn residue_fields_are_bounded_but_not_descent_data() {
        assert_eq!(accept_level0(ZFamily::ResidueFields, 1).unwrap(), (-1, 0));
        match validate_descent(ZFamily::ResidueFields, &[2, 3, 5], 4).unwrap() {
            DescentCheck::Rejected(w) => {
                assert_eq!(w.prime, 7);
                assert!(w.residues.iter().all(|&r| r != 0));
            }
            other => panic!("expected rejection, got {other:?}"),
        }
        assert_eq!(validate_descent(ZFamily::Free(2), &[2], 1).unwrap(), DescentCheck::Cartesian { rank: 2 });
        assert!(accept_level0(ZFamily::GrowingAmplitude, 3).is_err());
    }

    #[test]
    fn ranks_of_the_structure_sheaf() {
        assert_eq!(structure_sheaf_ranks(&[2, 3, 5], 2).unwrap(), (1, 0));
        assert_eq!(structure_sheaf_ranks(&[7], 1).unwrap(), (1, 0));
    }
}
