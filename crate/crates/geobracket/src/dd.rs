//! Compensated double-double arithmetic for 2×2 matrix folds.
//!
//! Matrices of long words in a Schottky group have entries that grow like
//! e^(ℓ/2) while their traces and determinants stay small, so evaluating
//! trace or fixed points of a conjugate g·w·g⁻¹ in plain f64 cancels
//! catastrophically (entries ~1e19, trace error ~1e3). Folding the word with
//! error-free transformations keeps ~106 significant bits, which resolves
//! traces, determinants and fixed-point quadratics at every scale reachable
//! within the enumeration radii used here (word length ≲ 30).

/// Unevaluated sum hi + lo with |lo| ≤ ulp(hi)/2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> Dd {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    Dd { hi: s, lo: err }
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> Dd {
    // requires |a| >= |b|
    let s = a + b;
    let err = b - (s - a);
    Dd { hi: s, lo: err }
}

#[inline]
fn two_prod(a: f64, b: f64) -> Dd {
    let p = a * b;
    let err = a.mul_add(b, -p);
    Dd { hi: p, lo: err }
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };

    #[inline]
    pub fn from_f64(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    #[inline]
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    #[inline]
    pub fn add(self, other: Dd) -> Dd {
        let s = two_sum(self.hi, other.hi);
        let lo = s.lo + self.lo + other.lo;
        quick_two_sum(s.hi, lo)
    }

    #[inline]
    pub fn sub(self, other: Dd) -> Dd {
        self.add(other.neg())
    }

    #[inline]
    pub fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }

    #[inline]
    pub fn mul(self, other: Dd) -> Dd {
        let p = two_prod(self.hi, other.hi);
        let lo = p.lo + self.hi * other.lo + self.lo * other.hi;
        quick_two_sum(p.hi, lo)
    }

    #[inline]
    pub fn mul_f64(self, other: f64) -> Dd {
        let p = two_prod(self.hi, other);
        let lo = p.lo + self.lo * other;
        quick_two_sum(p.hi, lo)
    }

    pub fn div(self, other: Dd) -> Dd {
        let q1 = self.hi / other.hi;
        let r = self.sub(other.mul_f64(q1));
        let q2 = r.hi / other.hi;
        let r2 = r.sub(other.mul_f64(q2));
        let q3 = r2.hi / other.hi;
        quick_two_sum(q1, q2).add(Dd::from_f64(q3))
    }

    /// Square root by one Newton refinement of the f64 estimate.
    pub fn sqrt(self) -> Dd {
        if self.hi <= 0.0 {
            return Dd::ZERO;
        }
        let s = self.hi.sqrt();
        let s_dd = Dd::from_f64(s);
        // s + (self - s²) / (2 s)
        let corr = self.sub(s_dd.mul(s_dd)).div(s_dd.mul_f64(2.0));
        s_dd.add(corr)
    }

    #[inline]
    pub fn abs(self) -> Dd {
        if self.hi < 0.0 || (self.hi == 0.0 && self.lo < 0.0) {
            self.neg()
        } else {
            self
        }
    }
}

/// A 2×2 matrix with double-double entries, row major.
#[derive(Debug, Clone, Copy)]
pub struct DdMat {
    pub a: Dd,
    pub b: Dd,
    pub c: Dd,
    pub d: Dd,
}

impl DdMat {
    pub const IDENTITY: DdMat = DdMat {
        a: Dd { hi: 1.0, lo: 0.0 },
        b: Dd::ZERO,
        c: Dd::ZERO,
        d: Dd { hi: 1.0, lo: 0.0 },
    };

    pub fn from_f64(a: f64, b: f64, c: f64, d: f64) -> DdMat {
        DdMat {
            a: Dd::from_f64(a),
            b: Dd::from_f64(b),
            c: Dd::from_f64(c),
            d: Dd::from_f64(d),
        }
    }

    pub fn mul(&self, o: &DdMat) -> DdMat {
        DdMat {
            a: self.a.mul(o.a).add(self.b.mul(o.c)),
            b: self.a.mul(o.b).add(self.b.mul(o.d)),
            c: self.c.mul(o.a).add(self.d.mul(o.c)),
            d: self.c.mul(o.b).add(self.d.mul(o.d)),
        }
    }

    /// Adjugate; equals the inverse for determinant one.
    pub fn inverse_unimodular(&self) -> DdMat {
        DdMat {
            a: self.d,
            b: self.b.neg(),
            c: self.c.neg(),
            d: self.a,
        }
    }

    pub fn trace(&self) -> Dd {
        self.a.add(self.d)
    }

    pub fn det(&self) -> Dd {
        self.a.mul(self.d).sub(self.b.mul(self.c))
    }

    pub fn max_abs(&self) -> f64 {
        self.a
            .hi
            .abs()
            .max(self.b.hi.abs())
            .max(self.c.hi.abs())
            .max(self.d.hi.abs())
    }
}
