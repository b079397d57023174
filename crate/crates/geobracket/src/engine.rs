//! From conjugacy classes to geometry: closed geodesics, lift enumeration,
//! and intersection structure.
//!
//! The closed geodesic of a class x is the projection of the axis of its
//! holonomy matrix X. Crossings of x and y on the surface are found by
//! enumerating distinct conjugates h of the based representative of y —
//! each labels one lift of y in the universal cover — and keeping those
//! whose axis crosses the axis of X at a parameter t in the fundamental
//! window [0, ℓ_x). Lift labels are exact reduced words, so deduplication
//! never depends on floating point. Completeness of the enumeration within
//! a radius is not proven a priori; it is enforced by the radius-stability
//! gate in the verify module.
//!
//! Parameters along an axis follow the fixed origin convention of
//! [`crate::hyperbolic::param_of`]: zero at the point closest to `i`.

use crate::hyperbolic::{
    self, dd_axis, dd_translation_length, forward_angle, intersect, linked, param_of, point_at,
    tangent_at, DirectedGeodesic, Isometry, PlanePoint,
};
use crate::surface::SurfaceSpec;
use crate::words::{conjugates_up_to, CyclicWord, Word};
use crate::{Error, Result};

/// A free homotopy class together with its geometric data.
#[derive(Debug, Clone)]
pub struct ClosedGeodesic {
    /// The canonical conjugacy class.
    pub cls: CyclicWord,
    /// The canonical rotation read as a based word.
    pub rep: Word,
    /// Holonomy matrix of `rep`.
    pub mat: Isometry,
    /// Directed axis of `mat`; the geodesic is its projection.
    pub ax: DirectedGeodesic,
    /// Translation length ℓ > 0.
    pub length: f64,
}

/// One lift of a closed curve: a distinct conjugate of the based
/// representative together with its directed axis.
#[derive(Debug, Clone)]
pub struct Lift {
    pub word: Word,
    pub axis: DirectedGeodesic,
    pub length: f64,
}

/// One intersection point of two geodesics, seen from the base strand.
#[derive(Debug, Clone)]
pub struct Crossing {
    /// The x-side; its axis carries the crossing parameter.
    pub base: ClosedGeodesic,
    /// Exact conjugate element whose axis is the crossing lift of y.
    pub other: Word,
    pub other_axis: DirectedGeodesic,
    pub other_length: f64,
    /// The crossing point in the upper half-plane.
    pub point: PlanePoint,
    /// Crossing parameter along the base axis, in [0, ℓ_x).
    pub t: f64,
    /// Orientation sign of (base tangent, other tangent).
    pub sign: i8,
    /// Forward angle between the two directed strands, in (0, π).
    pub angle: f64,
}

/// Which strand comes first when reading off the intersection sign.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StrandOrder {
    BaseFirst,
    OtherFirst,
}

/// Sign of the crossing for the given strand order; swapping strands flips
/// the sign (determinant antisymmetry).
pub fn sign_at(cr: &Crossing, order: StrandOrder) -> i8 {
    match order {
        StrandOrder::BaseFirst => cr.sign,
        StrandOrder::OtherFirst => -cr.sign,
    }
}

/// Builds the closed geodesic of a class.
pub fn geodesic_of(s: &SurfaceSpec, c: &CyclicWord) -> Result<ClosedGeodesic> {
    let rep = c.as_word();
    let ddm = s.dd_word_matrix(&rep);
    let ax = dd_axis(&ddm)?.ok_or_else(|| {
        Error::InvalidSurface(format!("axis of {c} is beyond f64 resolution"))
    })?;
    let length = dd_translation_length(&ddm)?;
    Ok(ClosedGeodesic {
        cls: c.clone(),
        rep: rep.clone(),
        mat: s.word_to_matrix(&rep),
        ax,
        length,
    })
}

/// Enumerates the distinct lifts of the class of `base` with conjugator
/// length at most `radius`, in deterministic first-seen order.
pub fn enumerate_lifts(s: &SurfaceSpec, base: &Word, radius: usize) -> Result<Vec<Lift>> {
    let mut lifts = Vec::new();
    for h in conjugates_up_to(base, s.rank(), radius) {
        let m = s.dd_word_matrix(&h);
        // lifts too remote for their endpoints to separate in f64 cannot
        // reach the crossing window of any bounded base segment
        let axis = match dd_axis(&m)? {
            Some(axis) => axis,
            None => continue,
        };
        let length = dd_translation_length(&m)?;
        lifts.push(Lift {
            word: h,
            axis,
            length,
        });
    }
    Ok(lifts)
}

/// All surface intersection points of the geodesics of x and y, one
/// `Crossing` per point, ordered by ascending parameter then lift word.
///
/// For x = y this returns each unordered self-crossing twice, once per
/// strand, so the count is 2·SL(x). The lifts of the base strand itself
/// (the conjugate equal to the representative or its inverse) are excluded
/// as non-transversal.
pub fn crossings(s: &SurfaceSpec, x: &CyclicWord, y: &CyclicWord, radius: usize) -> Result<Vec<Crossing>> {
    let base = geodesic_of(s, x)?;
    let lifts = enumerate_lifts(s, &y.as_word(), radius)?;
    crossings_with_lifts(&base, &lifts)
}

/// Crossing search against a pre-enumerated lift set (shared across base
/// classes when scanning many pairs).
pub fn crossings_with_lifts(base: &ClosedGeodesic, lifts: &[Lift]) -> Result<Vec<Crossing>> {
    let rep_inv = base.rep.invert();
    let mut out = Vec::new();
    for lift in lifts {
        if lift.word == base.rep || lift.word == rep_inv {
            continue; // the base strand itself or its reversal
        }
        if lift.axis.same_unoriented(&base.ax) {
            continue;
        }
        if !linked(&base.ax, &lift.axis) {
            continue;
        }
        // Linked endpoint pairs guarantee a crossing in exact arithmetic.
        // Lifts whose endpoints crowd a base endpoint below f64 resolution
        // can still fail the interior computation; their crossing parameter
        // is far outside the window, so they are skipped, not errors.
        let point = match intersect(&base.ax, &lift.axis)? {
            Some(p) => p,
            None => continue,
        };
        let t = match param_of(&base.ax, point) {
            Ok(t) => t,
            Err(_) => continue,
        };
        if !(0.0..base.length).contains(&t) {
            continue;
        }
        let tb = tangent_at(&base.ax, point);
        let to = tangent_at(&lift.axis, point);
        let cross = tb.0 * to.1 - tb.1 * to.0;
        let angle = forward_angle(&base.ax, &lift.axis, point)?;
        if angle < 1e-9 || angle > std::f64::consts::PI - 1e-9 {
            return Err(Error::TangentDegenerate { angle });
        }
        out.push(Crossing {
            base: base.clone(),
            other: lift.word.clone(),
            other_axis: lift.axis,
            other_length: lift.length,
            point,
            t,
            sign: if cross > 0.0 { 1 } else { -1 },
            angle,
        });
    }
    out.sort_by(|a, b| {
        a.t.partial_cmp(&b.t)
            .unwrap()
            .then_with(|| a.other.cmp(&b.other))
    });
    Ok(out)
}

/// Self-intersection number of a primitive class: half the strand count.
pub fn self_intersection_number(s: &SurfaceSpec, x: &CyclicWord, radius: usize) -> Result<usize> {
    let (root, exp) = x.root_power();
    if exp != 1 {
        return Err(Error::NonPrimitive {
            word: x.to_string(),
            root: root.to_string(),
            exponent: exp,
        });
    }
    let crs = crossings(s, x, x, radius)?;
    if crs.len() % 2 != 0 {
        return Err(Error::OddCount {
            word: x.to_string(),
            count: crs.len(),
        });
    }
    Ok(crs.len() / 2)
}

/// Class of the bracket term at a crossing: the loop product of the two
/// strands based at the point, i.e. the class of rep·other.
pub fn loop_product_class(cr: &Crossing) -> Result<CyclicWord> {
    CyclicWord::canonical(&cr.base.rep.concat(&cr.other))
}

/// Lift of the point dividing the closed geodesic of `g` into two equal
/// arcs from the crossing point: parameter t + ℓ/2 reduced into [0, ℓ).
pub fn midpoint_wrt(g: &ClosedGeodesic, cr: &Crossing) -> Result<PlanePoint> {
    let t = param_of(&g.ax, cr.point).map_err(|_| Error::PointNotOnAxis {
        dist: hyperbolic::dist_to_geodesic(cr.point, &g.ax),
    })?;
    let half = t + g.length / 2.0;
    let wrapped = if half >= g.length { half - g.length } else { half };
    Ok(point_at(&g.ax, wrapped))
}

/// The two half-length points of Corollary-2 type at a crossing, unwrapped:
/// S at t + ℓx/2 ahead on the base axis, T at ℓy/2 behind on the other
/// axis. The axis of the term matrix (base·other) passes through both, is
/// directed from T to S, and translates by 2·dist(S, T).
pub fn term_midpoints(cr: &Crossing) -> Result<(PlanePoint, PlanePoint)> {
    let tb = param_of(&cr.base.ax, cr.point).expect("crossing point on base axis");
    let s = point_at(&cr.base.ax, tb + cr.base.length / 2.0);
    let to = param_of(&cr.other_axis, cr.point).map_err(|_| Error::PointNotOnAxis {
        dist: hyperbolic::dist_to_geodesic(cr.point, &cr.other_axis),
    })?;
    let t = point_at(&cr.other_axis, to - cr.other_length / 2.0);
    Ok((s, t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hyperbolic::{beardon_length, dist, dist_to_geodesic};
    use crate::surface::builtin;

    fn cls(s: &str) -> CyclicWord {
        CyclicWord::parse(s).unwrap()
    }

    #[test]
    fn geodesic_of_examples() {
        let s = builtin("pants", &[]).unwrap();
        let a = geodesic_of(&s, &cls("a")).unwrap();
        let direct = s
            .word_to_matrix(&Word::parse("a").unwrap())
            .translation_length()
            .unwrap();
        assert!((a.length - direct).abs() < 1e-10);
        // conjugacy invariance and powers
        let conj = geodesic_of(&s, &CyclicWord::canonical(&Word::parse("abA").unwrap()).unwrap())
            .unwrap();
        let b = geodesic_of(&s, &cls("b")).unwrap();
        assert!((conj.length - b.length).abs() < 1e-10);
        let a2 = geodesic_of(&s, &cls("aa")).unwrap();
        assert!((a2.length - 2.0 * a.length).abs() < 1e-9);
        assert!(matches!(
            CyclicWord::canonical(&Word::identity()),
            Err(Error::IdentityClass)
        ));
    }

    #[test]
    fn crossing_counts_on_builtins() {
        let pants = builtin("pants", &[]).unwrap();
        let torus = builtin("holed-torus", &[]).unwrap();
        assert_eq!(crossings(&pants, &cls("a"), &cls("b"), 8).unwrap().len(), 0);
        assert_eq!(crossings(&torus, &cls("a"), &cls("b"), 8).unwrap().len(), 1);
        assert_eq!(crossings(&pants, &cls("a"), &cls("a"), 8).unwrap().len(), 0);
        assert_eq!(crossings(&torus, &cls("a"), &cls("a"), 8).unwrap().len(), 0);
    }

    #[test]
    fn self_intersection_examples() {
        let pants = builtin("pants", &[]).unwrap();
        assert_eq!(self_intersection_number(&pants, &cls("a"), 8).unwrap(), 0);
        // the figure eight around the two cuffs
        assert_eq!(self_intersection_number(&pants, &cls("aB"), 8).unwrap(), 1);
        // the third boundary class is simple
        assert_eq!(self_intersection_number(&pants, &cls("ab"), 8).unwrap(), 0);
        assert_eq!(self_intersection_number(&pants, &cls("aaB"), 8).unwrap(), 2);
        assert!(matches!(
            self_intersection_number(&pants, &cls("aa"), 8),
            Err(Error::NonPrimitive { .. })
        ));
        let torus = builtin("holed-torus", &[]).unwrap();
        // the commutator is boundary parallel on the holed torus
        assert_eq!(self_intersection_number(&torus, &cls("abAB"), 8).unwrap(), 0);
    }

    #[test]
    fn sign_flips_under_swap_and_reversal() {
        let torus = builtin("holed-torus", &[]).unwrap();
        let xy = crossings(&torus, &cls("a"), &cls("b"), 8).unwrap();
        let yx = crossings(&torus, &cls("b"), &cls("a"), 8).unwrap();
        assert_eq!(xy.len(), 1);
        assert_eq!(yx.len(), 1);
        assert_eq!(xy[0].sign, -yx[0].sign);
        assert_eq!(sign_at(&xy[0], StrandOrder::OtherFirst), -xy[0].sign);
        // reversing the y strand flips the sign
        let ybar = crossings(&torus, &cls("a"), &cls("b").inverse_class(), 8).unwrap();
        assert_eq!(ybar.len(), 1);
        assert_eq!(ybar[0].sign, -xy[0].sign);
    }

    #[test]
    fn loop_product_at_single_crossing() {
        let torus = builtin("holed-torus", &[]).unwrap();
        let crs = crossings(&torus, &cls("a"), &cls("b"), 8).unwrap();
        assert_eq!(crs.len(), 1);
        assert_eq!(loop_product_class(&crs[0]).unwrap(), cls("ab"));
    }

    #[test]
    fn term_axis_passes_through_midpoints() {
        // Corollary-2 geometry at a real crossing: the term axis passes
        // within 1e-8 of both half-length points and translates by twice
        // their distance.
        let torus = builtin("holed-torus", &[]).unwrap();
        for (x, y) in [("a", "b"), ("ab", "aB"), ("a", "ba")] {
            for cr in crossings(&torus, &cls(x), &cls(y), 8).unwrap() {
                let term_word = cr.base.rep.concat(&cr.other);
                let ddm = torus.dd_word_matrix(&term_word);
                let term_ax = dd_axis(&ddm).unwrap().unwrap();
                let term_len = dd_translation_length(&ddm).unwrap();
                let (s_pt, t_pt) = term_midpoints(&cr).unwrap();
                assert!(dist_to_geodesic(s_pt, &term_ax) < 1e-8);
                assert!(dist_to_geodesic(t_pt, &term_ax) < 1e-8);
                assert!((2.0 * dist(s_pt, t_pt) - term_len).abs() < 1e-8);
                // directed from T to S
                let ps = param_of(&term_ax, s_pt).unwrap();
                let pt = param_of(&term_ax, t_pt).unwrap();
                assert!(ps > pt);
            }
        }
    }

    #[test]
    fn lemma1_consistency_per_crossing() {
        // term length from the trace route equals the cosine-rule route
        let pants = builtin("pants", &[]).unwrap();
        for cr in crossings(&pants, &cls("aB"), &cls("aB"), 8).unwrap() {
            let term_word = cr.base.rep.concat(&cr.other);
            let term_len = dd_translation_length(&pants.dd_word_matrix(&term_word)).unwrap();
            let alpha = std::f64::consts::PI - cr.angle;
            let formula = beardon_length(cr.base.length, cr.other_length, alpha).unwrap();
            assert!(
                (term_len - formula).abs() < 1e-7,
                "term {term_len} vs formula {formula}"
            );
        }
    }

    #[test]
    fn midpoint_wrt_properties() {
        let torus = builtin("holed-torus", &[]).unwrap();
        let crs = crossings(&torus, &cls("a"), &cls("b"), 8).unwrap();
        let cr = &crs[0];
        let m = midpoint_wrt(&cr.base, cr).unwrap();
        let tm = param_of(&cr.base.ax, m).unwrap();
        let expect = (cr.t + cr.base.length / 2.0) % cr.base.length;
        assert!((tm - expect).abs() < 1e-9);
        // the two arcs from the crossing to the midpoint have equal length
        let arc1 = (tm - cr.t).rem_euclid(cr.base.length);
        let arc2 = (cr.t - tm).rem_euclid(cr.base.length);
        assert!((arc1 - arc2).abs() < 1e-9);
    }

    #[test]
    fn crossing_multiset_is_rotation_invariant() {
        // recomputing with a rotated based representative gives the same
        // term class multiset
        let pants = builtin("pants", &[]).unwrap();
        let x = cls("aBB");
        let base = geodesic_of(&pants, &x).unwrap();
        let mut rotated_letters = x.letters().to_vec();
        rotated_letters.rotate_left(1);
        let rot_word = Word::reduce(rotated_letters);
        let rot_base = ClosedGeodesic {
            cls: x.clone(),
            rep: rot_word.clone(),
            mat: pants.word_to_matrix(&rot_word),
            ax: dd_axis(&pants.dd_word_matrix(&rot_word)).unwrap().unwrap(),
            length: dd_translation_length(&pants.dd_word_matrix(&rot_word)).unwrap(),
        };
        let lifts_a = enumerate_lifts(&pants, &x.as_word(), 8).unwrap();
        let lifts_b = enumerate_lifts(&pants, &rot_word, 8).unwrap();
        let mut terms_a: Vec<String> = crossings_with_lifts(&base, &lifts_a)
            .unwrap()
            .iter()
            .map(|cr| loop_product_class(cr).unwrap().to_string())
            .collect();
        let mut terms_b: Vec<String> = crossings_with_lifts(&rot_base, &lifts_b)
            .unwrap()
            .iter()
            .map(|cr| loop_product_class(cr).unwrap().to_string())
            .collect();
        terms_a.sort();
        terms_b.sort();
        assert_eq!(terms_a, terms_b);
    }

    #[test]
    fn parity_holds_for_short_primitives() {
        for name in ["pants", "holed-torus"] {
            let s = builtin(name, &[]).unwrap();
            for c in crate::words::primitive_classes_up_to(2, 3) {
                let n = crossings(&s, &c, &c, 8).unwrap().len();
                assert_eq!(n % 2, 0, "{name}: odd self-crossing count for {c}");
            }
        }
    }
}
