//! The Goldman bracket as a formal integer combination of canonical
//! conjugacy classes, plus the simplicity tests built on it.
//!
//! Sign convention: the upper half-plane carries its standard orientation
//! and the sign at a crossing is the orientation sign of (x-tangent,
//! y-tangent). A global flip would rescale every bracket by −1 and affects
//! none of the theorems checked here.
//!
//! When the two arguments share a geodesic image (y is x, x̄ or a power of
//! either) the ordered-lift semantics apply: lifts of y^m along an axis of
//! the root carry m parametrization phases, so each geometric crossing
//! contributes its term with multiplicity m, and the lift that is the base
//! strand itself (or its reversal) is excluded as non-transversal.

use crate::engine::{crossings, Crossing};
use crate::surface::SurfaceSpec;
use crate::words::CyclicWord;
use crate::{Error, Result};
use num_bigint::{BigInt, BigUint};
use num_traits::Zero;
use std::collections::BTreeMap;
use std::fmt;

/// A finite integer combination of conjugacy classes, zero terms dropped.
/// Iteration order is the canonical word order.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BracketResult {
    terms: BTreeMap<CyclicWord, BigInt>,
}

impl BracketResult {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_term(&mut self, class: CyclicWord, coeff: impl Into<BigInt>) {
        let coeff = coeff.into();
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(class).or_insert_with(BigInt::zero);
        *entry += coeff;
        self.terms.retain(|_, v| !v.is_zero());
    }

    pub fn add_all(&mut self, other: &BracketResult) {
        for (c, v) in &other.terms {
            self.add_term(c.clone(), v.clone());
        }
    }

    pub fn add_scaled(&mut self, other: &BracketResult, scale: &BigInt) {
        for (c, v) in &other.terms {
            self.add_term(c.clone(), v * scale);
        }
    }

    pub fn negated(&self) -> BracketResult {
        let mut out = BracketResult::new();
        for (c, v) in &self.terms {
            out.add_term(c.clone(), -v.clone());
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, class: &CyclicWord) -> BigInt {
        self.terms.get(class).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&CyclicWord, &BigInt)> {
        self.terms.iter()
    }

    pub fn class_count(&self) -> usize {
        self.terms.len()
    }

    /// Number of terms counted with multiplicity: Σ |coefficient|.
    pub fn term_count(&self) -> BigUint {
        self.terms.values().map(|v| v.magnitude().clone()).sum()
    }

    /// Canonical JSON object: word-syntax keys in byte order, integer
    /// coefficients. Byte-exact for a given term map.
    pub fn to_json(&self) -> String {
        let mut entries: Vec<(String, String)> = self
            .terms
            .iter()
            .map(|(c, v)| (c.to_string(), v.to_string()))
            .collect();
        entries.sort();
        let body: Vec<String> = entries
            .iter()
            .map(|(k, v)| format!("{}:{}", serde_json::to_string(k).unwrap(), v))
            .collect();
        format!("{{{}}}", body.join(","))
    }
}

impl fmt::Display for BracketResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_json())
    }
}

/// One crossing together with its bracket term data.
#[derive(Debug, Clone)]
pub struct BracketCrossing {
    pub crossing: Crossing,
    /// The x-side group element based at the crossing (rep of x, or its
    /// root power in the shared-image modes).
    pub base_word: crate::words::Word,
    /// The y-side lift element through the crossing point.
    pub other_word: crate::words::Word,
    /// base_word · other_word, reduced; the term is its class.
    pub term_word: crate::words::Word,
    pub term_class: CyclicWord,
    /// Lift-phase multiplicity of the term (1 unless the arguments share a
    /// geodesic image).
    pub multiplicity: u32,
}

fn require_primitive(x: &CyclicWord) -> Result<()> {
    let (root, exp) = x.root_power();
    if exp != 1 {
        return Err(Error::NonPrimitive {
            word: x.to_string(),
            root: root.to_string(),
            exponent: exp,
        });
    }
    Ok(())
}

/// The crossings contributing to [x, y] with their term words, classes and
/// multiplicities. Empty when x = y (antisymmetry forces [x, x] = 0).
pub fn bracket_crossings(
    s: &SurfaceSpec,
    x: &CyclicWord,
    y: &CyclicWord,
    radius: usize,
) -> Result<Vec<BracketCrossing>> {
    let (rx, k) = x.root_power();
    let (ry, m) = y.root_power();
    let shared = if ry == rx {
        Some(ry.clone())
    } else if ry == rx.inverse_class() {
        Some(ry.clone())
    } else {
        None
    };
    let mut out = Vec::new();
    match shared {
        Some(root_y) => {
            if x == y {
                return Ok(out);
            }
            // crossings of the root strands; the base element is rx^k and
            // the lift element along each crossing strand is h^m
            let crs = crossings(s, &rx, &root_y, radius)?;
            for cr in crs {
                let base_word = rx.as_word().power(k as i64);
                let other_word = cr.other.power(m as i64);
                let term_word = base_word.concat(&other_word);
                let term_class = CyclicWord::canonical(&term_word)?;
                out.push(BracketCrossing {
                    crossing: cr,
                    base_word,
                    other_word,
                    term_word,
                    term_class,
                    multiplicity: k * m,
                });
            }
        }
        None => {
            let crs = crossings(s, x, y, radius)?;
            for cr in crs {
                let base_word = cr.base.rep.clone();
                let other_word = cr.other.clone();
                let term_word = base_word.concat(&other_word);
                let term_class = CyclicWord::canonical(&term_word)?;
                out.push(BracketCrossing {
                    crossing: cr,
                    base_word,
                    other_word,
                    term_word,
                    term_class,
                    multiplicity: 1,
                });
            }
        }
    }
    Ok(out)
}

/// The Goldman bracket [x, y]: signed sum over crossings of the loop
/// product classes.
pub fn bracket(
    s: &SurfaceSpec,
    x: &CyclicWord,
    y: &CyclicWord,
    radius: usize,
) -> Result<BracketResult> {
    let mut out = BracketResult::new();
    for bc in bracket_crossings(s, x, y, radius)? {
        out.add_term(
            bc.term_class,
            BigInt::from(bc.crossing.sign) * BigInt::from(bc.multiplicity),
        );
    }
    Ok(out)
}

/// [x, xⁿ] for primitive x and n ≥ 2.
pub fn bracket_power(
    s: &SurfaceSpec,
    x: &CyclicWord,
    n: u32,
    radius: usize,
) -> Result<BracketResult> {
    require_primitive(x)?;
    assert!(n >= 2, "power mode needs n >= 2");
    let y = CyclicWord::canonical(&x.as_word().power(n as i64))?;
    bracket(s, x, &y, radius)
}

/// [x, x̄] for primitive x.
pub fn bracket_bar(s: &SurfaceSpec, x: &CyclicWord, radius: usize) -> Result<BracketResult> {
    require_primitive(x)?;
    bracket(s, x, &x.inverse_class(), radius)
}

/// Simplicity test mode: which vanishing bracket certifies simplicity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SimplicityMode {
    Bar,
    Power(u32),
}

/// True iff the selected bracket is empty; cross-checked against the
/// self-intersection count, with a consistency error on disagreement.
pub fn is_simple(
    s: &SurfaceSpec,
    x: &CyclicWord,
    radius: usize,
    mode: SimplicityMode,
) -> Result<bool> {
    require_primitive(x)?;
    let b = match mode {
        SimplicityMode::Bar => bracket_bar(s, x, radius)?,
        SimplicityMode::Power(n) => bracket_power(s, x, n, radius)?,
    };
    let sl = crate::engine::self_intersection_number(s, x, radius)?;
    if b.is_zero() != (sl == 0) {
        return Err(Error::ConsistencyError {
            word: x.to_string(),
            bracket_empty: b.is_zero(),
            self_int: sl,
        });
    }
    Ok(b.is_zero())
}

/// A maximal matching of crossings with equal term class and opposite
/// signs, greedy by parameter. Any valid matching passes the symmetry
/// checks, since equal term classes force congruent angles.
pub fn canceling_pairs(
    s: &SurfaceSpec,
    x: &CyclicWord,
    y: &CyclicWord,
    radius: usize,
) -> Result<Vec<(BracketCrossing, BracketCrossing)>> {
    let all = bracket_crossings(s, x, y, radius)?;
    let mut by_class: BTreeMap<CyclicWord, (Vec<usize>, Vec<usize>)> = BTreeMap::new();
    for (i, bc) in all.iter().enumerate() {
        let slot = by_class.entry(bc.term_class.clone()).or_default();
        if bc.crossing.sign > 0 {
            slot.0.push(i);
        } else {
            slot.1.push(i);
        }
    }
    let mut pairs = Vec::new();
    for (_, (pos, neg)) in by_class {
        for (i, j) in pos.into_iter().zip(neg.into_iter()) {
            pairs.push((all[i].clone(), all[j].clone()));
        }
    }
    Ok(pairs)
}

/// Linear extension of the bracket to a formal sum in the second slot,
/// used by the Jacobi identity check.
pub fn bracket_linear(
    s: &SurfaceSpec,
    x: &CyclicWord,
    sum: &BracketResult,
    radius: usize,
) -> Result<BracketResult> {
    let mut out = BracketResult::new();
    for (c, coeff) in sum.iter() {
        let part = bracket(s, x, c, radius)?;
        out.add_scaled(&part, coeff);
    }
    Ok(out)
}

/// Wraps a single class as a formal sum with coefficient one.
pub fn singleton(class: &CyclicWord) -> BracketResult {
    let mut r = BracketResult::new();
    r.add_term(class.clone(), 1);
    r
}
