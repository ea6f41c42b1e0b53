//! Hurwitz-Radon arithmetic and the minimal-exponent integrality solver.
//!
//! Over `R`, a skew fibration of `R^n` by oriented `p`-planes exists iff
//! `p <= rho(q) - 1` with `q = n - p`.  Over `C` and `H` the known necessary
//! condition is arithmetic: the coefficients of `t^1..t^p` in a fixed base
//! series raised to the power `q` must all be integers (with an evenness
//! twist in the quaternionic case).  The set of admissible `q` is the set of
//! multiples of a single period, which this module computes exactly:
//! clear denominators so each coefficient becomes a congruence
//! `N_k(q) = 0 (mod D_k)`, then solve per prime power by digit-wise lifting.

use num::{BigInt, BigRational, BigUint, Integer, One, Zero};
use thiserror::Error;

use crate::series::{base_series, BaseSeriesKind};
use crate::sympow::{ExponentPolynomial, SymbolicPowerExpansion};
use crate::Field;

/// Largest prime we are willing to enumerate residues for.  The moduli seen
/// here are denominators of series coefficients, which are smooth; a factor
/// beyond this bound means the input is not from that family.
const ENUMERATION_LIMIT: u64 = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IntegralityError {
    #[error("argument out of domain: {0}")]
    Domain(String),
    #[error("solution set mod powers of {prime} is not a set of multiples")]
    StructureViolation { prime: BigUint },
    #[error("modulus has a factor {factor} too large to enumerate")]
    FactorTooLarge { factor: BigUint },
    #[error("relation violated at p={p}: c_p={c_p}, b_(2p+1)={b}")]
    RelationViolation { p: u32, c_p: BigUint, b: BigUint },
}

/// Hurwitz-Radon function: for `q = 2^(b+4c) (2a+1)` with `0 <= b < 4`,
/// `rho(q) = 2^b + 8c`.
pub fn hurwitz_radon(q: &BigUint) -> Result<u64, IntegralityError> {
    if q.is_zero() {
        return Err(IntegralityError::Domain("rho(0) is undefined".into()));
    }
    let v = q.trailing_zeros().unwrap_or(0);
    let b = v % 4;
    let c = v / 4;
    Ok((1u64 << b) + 8 * c)
}

pub fn hurwitz_radon_u64(q: u64) -> Result<u64, IntegralityError> {
    hurwitz_radon(&BigUint::from(q))
}

/// Whether a real `(p, p+q)`-fibration exists: `p <= rho(q) - 1`.
pub fn real_exists(p: u64, q: &BigUint) -> Result<bool, IntegralityError> {
    Ok(p < hurwitz_radon(q)?)
}

/// The smallest power of two `a` with `rho(a) >= p + 1`.  Since `rho`
/// depends only on the 2-adic valuation and is increasing in it, the set
/// `{q : p <= rho(q) - 1}` is exactly the set of multiples of this value.
pub fn real_period(p: u64) -> BigUint {
    let mut v = 0u64;
    loop {
        let rho = hurwitz_radon(&(BigUint::one() << v)).expect("nonzero");
        if rho > p {
            return BigUint::one() << v;
        }
        v += 1;
    }
}

/// One congruence `poly(r) = 0 (mod modulus)` with integer coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    poly: Vec<BigInt>,
    modulus: BigUint,
    reduced: Vec<BigUint>,
}

impl Constraint {
    pub fn new(poly: Vec<BigInt>, modulus: BigUint) -> Self {
        assert!(!modulus.is_zero(), "modulus must be positive");
        let reduced = reduce_coeffs(&poly, &modulus);
        Constraint {
            poly,
            modulus,
            reduced,
        }
    }

    /// Encodes "`p(r)` is an integer": with denominators cleared to
    /// `n(r) = d * p(r)`, this is `n(r) = 0 (mod d)`.  Returns `None` when
    /// the condition holds for every integer `r` (integral coefficients).
    pub fn integrality(p: &ExponentPolynomial) -> Option<Self> {
        let (poly, modulus) = p.cleared();
        if modulus.is_one() {
            return None;
        }
        Some(Self::new(poly, modulus))
    }

    /// Encodes "`p(r)` is an even integer": `n(r) = 0 (mod 2d)`.
    pub fn even_integrality(p: &ExponentPolynomial) -> Option<Self> {
        if p.is_zero() {
            return None;
        }
        let (poly, modulus) = p.cleared();
        Some(Self::new(poly, modulus * BigUint::from(2u32)))
    }

    pub fn modulus(&self) -> &BigUint {
        &self.modulus
    }

    /// Exact test of the congruence at `r`, by modular Horner evaluation.
    pub fn holds_at(&self, r: &BigUint) -> bool {
        horner_mod(&self.reduced, &(r % &self.modulus), &self.modulus).is_zero()
    }
}

fn reduce_coeffs(poly: &[BigInt], m: &BigUint) -> Vec<BigUint> {
    let m_int = BigInt::from(m.clone());
    poly.iter()
        .map(|c| {
            let r = c.mod_floor(&m_int);
            r.to_biguint().expect("mod_floor of positive modulus")
        })
        .collect()
}

fn horner_mod(coeffs: &[BigUint], r: &BigUint, m: &BigUint) -> BigUint {
    let mut acc = BigUint::zero();
    for c in coeffs.iter().rev() {
        acc = (acc * r + c) % m;
    }
    acc
}

/// A conjunction of congruences whose common solutions are expected to form
/// the set of multiples of a single number.
#[derive(Debug, Clone)]
pub struct CongruenceSystem {
    constraints: Vec<Constraint>,
}

impl CongruenceSystem {
    pub fn new(constraints: Vec<Constraint>) -> Self {
        CongruenceSystem { constraints }
    }

    pub fn is_empty(&self) -> bool {
        self.constraints.is_empty()
    }

    /// Least positive `r` satisfying every constraint, computed per prime
    /// power.  For each prime `p` dividing some modulus, residues are lifted
    /// digit by digit from mod `p` up to the maximal power `p^e`; the
    /// solution set there must be exactly the multiples of some `p^e'`
    /// (otherwise the minimum would not generate the solution set, and a
    /// [`IntegralityError::StructureViolation`] is raised).  The periods
    /// combine multiplicatively.
    ///
    /// An empty system is satisfied by every integer and yields 1.
    pub fn solve(&self) -> Result<BigUint, IntegralityError> {
        let mut prime_exponents: Vec<(u64, u32)> = Vec::new();
        for c in &self.constraints {
            for (prime, e) in factorize(c.modulus())? {
                match prime_exponents.iter_mut().find(|(p, _)| *p == prime) {
                    Some(entry) => entry.1 = entry.1.max(e),
                    None => prime_exponents.push((prime, e)),
                }
            }
        }
        prime_exponents.sort_unstable();

        let mut period = BigUint::one();
        for (prime, e) in prime_exponents {
            period *= self.solve_prime_power(prime, e)?;
        }
        Ok(period)
    }

    /// Returns `prime^e'` where the solution set mod `prime^e` is the set of
    /// multiples of `prime^e'`.
    fn solve_prime_power(&self, prime: u64, e: u32) -> Result<BigUint, IntegralityError> {
        let prime_big = BigUint::from(prime);
        // constraints with a p-part, paired with their p-adic exponent
        let relevant: Vec<(&Constraint, u32)> = self
            .constraints
            .iter()
            .filter_map(|c| {
                let mut e_i = 0u32;
                let mut m = c.modulus().clone();
                while (&m % &prime_big).is_zero() {
                    m /= &prime_big;
                    e_i += 1;
                }
                (e_i > 0).then_some((c, e_i))
            })
            .collect();

        let mut residues: Vec<BigUint> = vec![BigUint::zero()];
        let mut level_modulus = BigUint::one();
        for j in 1..=e {
            let prev_modulus = level_modulus.clone();
            level_modulus *= &prime_big;
            // coefficients reduced mod p^min(j, e_i), once per level
            let tests: Vec<(Vec<BigUint>, BigUint)> = relevant
                .iter()
                .map(|(c, e_i)| {
                    let m = BigUint::from(prime).pow((*e_i).min(j));
                    (reduce_coeffs(&c.poly, &m), m)
                })
                .collect();
            let mut next = Vec::new();
            for r in &residues {
                for digit in 0..prime {
                    let candidate = r + BigUint::from(digit) * &prev_modulus;
                    let ok = tests
                        .iter()
                        .all(|(coeffs, m)| horner_mod(coeffs, &(&candidate % m), m).is_zero());
                    if ok {
                        next.push(candidate);
                    }
                }
            }
            residues = next;
        }
        residues.sort_unstable();

        let violation = || IntegralityError::StructureViolation {
            prime: prime_big.clone(),
        };
        if residues.is_empty() || !residues[0].is_zero() {
            return Err(violation());
        }
        let step = if residues.len() == 1 {
            level_modulus.clone()
        } else {
            residues[1].clone()
        };
        // step must be p^e' and the set must be exactly its multiples
        let mut check = BigUint::zero();
        for r in &residues {
            if *r != check {
                return Err(violation());
            }
            check += &step;
        }
        if check != level_modulus {
            return Err(violation());
        }
        let mut power = BigUint::one();
        while power < step {
            power *= &prime_big;
        }
        if power != step {
            return Err(violation());
        }
        Ok(step)
    }
}

fn factorize(n: &BigUint) -> Result<Vec<(u64, u32)>, IntegralityError> {
    let mut rest = n.clone();
    let mut out = Vec::new();
    let mut d = 2u64;
    while d <= ENUMERATION_LIMIT && rest > BigUint::one() {
        let dv = BigUint::from(d);
        if (&rest % &dv).is_zero() {
            let mut e = 0u32;
            while (&rest % &dv).is_zero() {
                rest /= &dv;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if rest > BigUint::one() {
        return Err(IntegralityError::FactorTooLarge { factor: rest });
    }
    Ok(out)
}

/// The symbolic expansion backing the complex obstruction: coefficients of
/// `(t/ln(1+t))^q` as polynomials in `q`.
pub fn complex_expansion(p: u32) -> SymbolicPowerExpansion {
    base_series(BaseSeriesKind::Complex, p as usize)
        .pow_symbolic()
        .expect("constant term is 1")
}

/// Coefficients of `((2/sqrt t) asinh(sqrt t / 2))^(2q)` as polynomials in `q`.
pub fn quaternionic_expansion(p: u32) -> SymbolicPowerExpansion {
    base_series(BaseSeriesKind::Quaternionic, p as usize)
        .pow_symbolic()
        .expect("constant term is 1")
}

fn complex_system(expansion: &SymbolicPowerExpansion, p: u32) -> CongruenceSystem {
    CongruenceSystem::new(
        (1..=p as usize)
            .filter_map(|k| Constraint::integrality(expansion.poly(k)))
            .collect(),
    )
}

fn quaternionic_system(expansion: &SymbolicPowerExpansion, p: u32) -> CongruenceSystem {
    CongruenceSystem::new(
        (1..=p as usize)
            .filter_map(|k| {
                if k % 2 == 0 {
                    Constraint::integrality(expansion.poly(k))
                } else {
                    Constraint::even_integrality(expansion.poly(k))
                }
            })
            .collect(),
    )
}

/// The period `b_p`: `p` independent complex tangent fields exist on the
/// unit sphere of `C^q` iff `b_p | q`.
pub fn james_complex(p: u32) -> Result<BigUint, IntegralityError> {
    if p == 0 {
        return Err(IntegralityError::Domain("p must be positive".into()));
    }
    complex_system(&complex_expansion(p), p).solve()
}

/// The period `c_p` for quaternionic tangent fields: coefficients must be
/// integers for even index and even integers for odd index.
pub fn james_quaternionic(p: u32) -> Result<BigUint, IntegralityError> {
    if p == 0 {
        return Err(IntegralityError::Domain("p must be positive".into()));
    }
    quaternionic_system(&quaternionic_expansion(p), p).solve()
}

/// First failing coefficient index at a concrete exponent, or `None` if
/// coefficients `t^1..t^p` all pass.  This evaluates the polynomials
/// directly and is independent of the congruence solver.
pub fn first_failing_coefficient(
    expansion: &SymbolicPowerExpansion,
    field: Field,
    p: u32,
    q: &BigUint,
) -> Option<u32> {
    let q_rat = BigRational::from(BigInt::from(q.clone()));
    for k in 1..=p as usize {
        let value = expansion.poly(k).eval(&q_rat);
        if !value.is_integer() {
            return Some(k as u32);
        }
        if field == Field::H && k % 2 == 1 && value.numer().is_odd() {
            return Some(k as u32);
        }
    }
    None
}

/// Fast variant of [`first_failing_coefficient`] working on pre-cleared
/// constraints; used by the exhaustive admissible-set checks.
pub fn coefficients_pass(constraints: &[Constraint], q: &BigUint) -> bool {
    constraints.iter().all(|c| c.holds_at(q))
}

/// The per-coefficient constraint list for a field, for use with
/// [`coefficients_pass`].
pub fn field_constraints(field: Field, p: u32) -> Vec<Constraint> {
    match field {
        Field::R => panic!("coefficient constraints exist only over C and H"),
        Field::C => {
            let expansion = complex_expansion(p);
            (1..=p as usize)
                .filter_map(|k| Constraint::integrality(expansion.poly(k)))
                .collect()
        }
        Field::H => {
            let expansion = quaternionic_expansion(p);
            (1..=p as usize)
                .filter_map(|k| {
                    if k % 2 == 0 {
                        Constraint::integrality(expansion.poly(k))
                    } else {
                        Constraint::even_integrality(expansion.poly(k))
                    }
                })
                .collect()
        }
    }
}

/// The period governing `F`-`(p, n)`-fibrations together with query
/// metadata; `failing_coefficient` is set when a concrete admissibility
/// query was ruled out by that coefficient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JamesVerdict {
    pub field: Field,
    pub p: u32,
    pub period: BigUint,
    pub failing_coefficient: Option<u32>,
}

/// The period for `p` independent tangent fields over `field`: `a_p` (a
/// power of two), `b_p` or `c_p`.
pub fn james_verdict(field: Field, p: u32) -> Result<JamesVerdict, IntegralityError> {
    if p == 0 {
        return Err(IntegralityError::Domain("p must be positive".into()));
    }
    let period = match field {
        Field::R => real_period(p as u64),
        Field::C => james_complex(p)?,
        Field::H => james_quaternionic(p)?,
    };
    Ok(JamesVerdict {
        field,
        p,
        period,
        failing_coefficient: None,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Possible,
    /// Real case: `p > rho(q) - 1`.
    RuledOutRho {
        rho: u64,
    },
    /// Complex/quaternionic case: `q` is not a multiple of the period.
    RuledOutPeriod {
        period: BigUint,
        failing_coefficient: Option<u32>,
    },
}

impl Verdict {
    pub fn is_possible(&self) -> bool {
        matches!(self, Verdict::Possible)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Admissibility {
    pub field: Field,
    pub p: u32,
    pub n: BigUint,
    pub q: BigUint,
    pub verdict: Verdict,
}

/// Decides whether an `F`-`(p, n)`-fibration passes the known existence
/// obstructions, with `q = n - p`.
pub fn admissible(field: Field, p: u32, n: &BigUint) -> Result<Admissibility, IntegralityError> {
    if *n <= BigUint::from(p) {
        return Err(IntegralityError::Domain(format!(
            "need n > p, got p={p}, n={n}"
        )));
    }
    let q = n - BigUint::from(p);
    let verdict = match field {
        Field::R => {
            if real_exists(p as u64, &q)? {
                Verdict::Possible
            } else {
                Verdict::RuledOutRho {
                    rho: hurwitz_radon(&q)?,
                }
            }
        }
        Field::C | Field::H => {
            let james = james_verdict(field, p)?;
            if (&q % &james.period).is_zero() {
                Verdict::Possible
            } else {
                let expansion = if field == Field::C {
                    complex_expansion(p)
                } else {
                    quaternionic_expansion(p)
                };
                Verdict::RuledOutPeriod {
                    failing_coefficient: first_failing_coefficient(&expansion, field, p, &q),
                    period: james.period,
                }
            }
        }
    };
    Ok(Admissibility {
        field,
        p,
        n: n.clone(),
        q,
        verdict,
    })
}

/// Necessary conditions implied over the other fields:
/// a `C`-`(p,n)`-fibration needs an `R`-`(2p+1, 2n+1)`-fibration;
/// an `H`-`(p,n)`-fibration needs a `C`-`(2p+1, 2n+1)`- and an
/// `R`-`(2p+3, 2n+3)`-fibration.  Each implied query is evaluated.
pub fn cross_field_implications(
    field: Field,
    p: u32,
    n: &BigUint,
) -> Result<Vec<Admissibility>, IntegralityError> {
    let two_n = n * BigUint::from(2u32);
    match field {
        Field::R => Err(IntegralityError::Domain(
            "implications are defined for C and H only".into(),
        )),
        Field::C => Ok(vec![admissible(
            Field::R,
            2 * p + 1,
            &(&two_n + BigUint::one()),
        )?]),
        Field::H => Ok(vec![
            admissible(Field::C, 2 * p + 1, &(&two_n + BigUint::one()))?,
            admissible(Field::R, 2 * p + 3, &(&two_n + BigUint::from(3u32)))?,
        ]),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RelationCase {
    Equal,
    Half,
}

/// Checks `c_p = b_(2p+1)` or `c_p = b_(2p+1) / 2`, the latter being forced
/// for even `p`.
pub fn relation_check(p: u32) -> Result<RelationCase, IntegralityError> {
    let c_p = james_quaternionic(p)?;
    let b = james_complex(2 * p + 1)?;
    let double = &c_p * BigUint::from(2u32);
    if double == b {
        return Ok(RelationCase::Half);
    }
    if c_p == b && p % 2 == 1 {
        return Ok(RelationCase::Equal);
    }
    Err(IntegralityError::RelationViolation { p, c_p, b })
}

/// Leading-digits rendering (`d.dd e±xx`) used to compare large exact
/// entries against published order-of-magnitude values.
pub fn scientific_3(n: &BigUint) -> String {
    let digits = n.to_string();
    if digits.len() <= 3 {
        return digits;
    }
    // round to three significant digits
    let mut lead: u64 = digits[..4].parse().expect("digits");
    lead = (lead + 5) / 10;
    let mut exp = digits.len() as i64 - 3;
    if lead >= 1000 {
        lead /= 10;
        exp += 1;
    }
    format!("{}.{:02}e{}", lead / 100, lead % 100, exp + 2)
}
