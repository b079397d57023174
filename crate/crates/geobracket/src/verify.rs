//! Independent oracles and geometric predicates.
//!
//! The linking oracle recounts crossings from boundary circular order only,
//! never touching an interior intersection point, so it shares nothing with
//! the engine's crossing path beyond the conjugate enumeration and the axis
//! endpoints. Radius stability reruns the engine at a larger radius and
//! demands identical counts and term maps. The remaining checks are
//! consequences of the cancellation lemmas: congruent forward angles at
//! canceling pairs, existence of smaller-angle crossings, and the
//! reflection symmetry of the two zigzag lifts about perpendiculars to the
//! term axis.

use crate::bracket::{bracket, bracket_crossings, canceling_pairs, BracketCrossing};
use crate::engine::{crossings, geodesic_of};
use crate::hyperbolic::{
    dd_axis, dd_translation_length, dist, foot_on_geodesic, intersect, linked, midpoint, param_of,
    perpendicular_at, point_at, reflection_about, to_vertical, BoundaryPoint, DirectedGeodesic,
    Isometry, PlanePoint,
};
use crate::surface::SurfaceSpec;
use crate::words::{conjugates_up_to, CyclicWord};
use crate::Result;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// Outcome of one verification check over some instances.
#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub name: String,
    pub instances: usize,
    pub failures: Vec<String>,
    pub max_residual: f64,
    pub notes: Vec<String>,
}

impl VerificationReport {
    pub fn new(name: impl Into<String>) -> Self {
        VerificationReport {
            name: name.into(),
            instances: 0,
            failures: Vec::new(),
            max_residual: 0.0,
            notes: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn record(&mut self, residual: f64) {
        self.instances += 1;
        if residual.is_finite() {
            self.max_residual = self.max_residual.max(residual);
        }
    }

    pub fn fail(&mut self, msg: impl Into<String>) {
        self.failures.push(msg.into());
    }

    pub fn merge(&mut self, other: &VerificationReport) {
        self.instances += other.instances;
        self.max_residual = self.max_residual.max(other.max_residual);
        self.failures.extend(other.failures.iter().cloned());
        self.notes.extend(other.notes.iter().cloned());
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// The standard desk-scale corpus: primitive classes of bounded cyclic
/// length over two generators.
pub fn corpus(max_len: usize) -> Vec<CyclicWord> {
    crate::words::primitive_classes_up_to(2, max_len)
}

// ---------------------------------------------------------------------------
// Linking oracle

/// Counts crossings of x and y from boundary data alone: a lift crosses the
/// base axis iff the endpoint pairs alternate in circular order, and its
/// window parameter comes from the chart images of the lift's endpoints —
/// no interior intersection point is ever computed.
pub fn linking_oracle_count(
    s: &SurfaceSpec,
    x: &CyclicWord,
    y: &CyclicWord,
    radius: usize,
) -> Result<usize> {
    let base = geodesic_of(s, x)?;
    let rep_inv = base.rep.invert();
    let chart = to_vertical(&base.ax);
    let w = chart.apply(PlanePoint::I);
    let tau0 = w.x.hypot(w.y);
    let mut count = 0usize;
    for h in conjugates_up_to(&y.as_word(), s.rank(), radius) {
        if h == base.rep || h == rep_inv {
            continue;
        }
        let axis = match dd_axis(&s.dd_word_matrix(&h))? {
            Some(axis) => axis,
            None => continue, // unresolvable far lift, outside any window
        };
        if axis.same_unoriented(&base.ax) {
            continue;
        }
        if !linked(&base.ax, &axis) {
            continue;
        }
        // chart endpoints: linked lifts separate 0 and infinity, so their
        // images have opposite signs and the crossing height is sqrt(-u*v)
        let u = chart.apply_boundary(axis.from);
        let v = chart.apply_boundary(axis.to);
        let (u, v) = match (u, v) {
            (BoundaryPoint::Finite(u), BoundaryPoint::Finite(v)) => (u, v),
            _ => continue,
        };
        if u * v >= 0.0 {
            continue; // beyond f64 resolution; far outside the window
        }
        let t = ((-u * v).sqrt() / tau0).ln();
        if (0.0..base.length).contains(&t) {
            count += 1;
        }
    }
    Ok(count)
}

// ---------------------------------------------------------------------------
// Radius stability

/// Pass iff crossing count and bracket term map are identical at `radius`
/// and `radius + 2`.
pub fn radius_stability(
    s: &SurfaceSpec,
    x: &CyclicWord,
    y: &CyclicWord,
    radius: usize,
) -> Result<VerificationReport> {
    let mut rep = VerificationReport::new(format!("radius-stability [{x},{y}] L={radius}"));
    let n1 = bracket_crossings(s, x, y, radius)?.len();
    let n2 = bracket_crossings(s, x, y, radius + 2)?.len();
    let b1 = bracket(s, x, y, radius)?;
    let b2 = bracket(s, x, y, radius + 2)?;
    rep.record(0.0);
    if n1 != n2 {
        rep.fail(format!("crossing count changed: {n1} at L -> {n2} at L+2"));
    }
    if b1 != b2 {
        rep.fail(format!(
            "term map changed: {} at L -> {} at L+2",
            b1.to_json(),
            b2.to_json()
        ));
    }
    Ok(rep)
}

// ---------------------------------------------------------------------------
// Corollary of the cosine rule: canceling terms have congruent angles

/// For every canceling pair of [x, y], the forward angles at the two
/// crossings agree within 1e-6.
pub fn check_forward_angle_congruence(
    s: &SurfaceSpec,
    x: &CyclicWord,
    y: &CyclicWord,
    radius: usize,
) -> Result<VerificationReport> {
    let mut rep = VerificationReport::new(format!("angle-congruence [{x},{y}]"));
    for (p, q) in canceling_pairs(s, x, y, radius)? {
        let residual = (p.crossing.angle - q.crossing.angle).abs();
        rep.record(residual);
        if residual > 1e-6 {
            rep.fail(format!(
                "angles differ by {residual} at t = {} and t = {}",
                p.crossing.t, q.crossing.t
            ));
        }
    }
    Ok(rep)
}

// ---------------------------------------------------------------------------
// Smaller-angle existence (the engine of the simplicity proofs)

/// For each canceling pair of [x, y] with forward angle θ there must be
/// another crossing with a strictly smaller forward angle: an x∩y crossing,
/// or a self-intersection of x or of y. Equality within the 1e-9 margin is
/// reported, not failed.
pub fn check_smaller_angle_exists(
    s: &SurfaceSpec,
    x: &CyclicWord,
    y: &CyclicWord,
    radius: usize,
) -> Result<VerificationReport> {
    let mut rep = VerificationReport::new(format!("smaller-angle [{x},{y}]"));
    let pairs = canceling_pairs(s, x, y, radius)?;
    if pairs.is_empty() {
        rep.notes.push("no canceling pairs (vacuous pass)".into());
        return Ok(rep);
    }
    let mutual: Vec<f64> = bracket_crossings(s, x, y, radius)?
        .iter()
        .map(|bc| bc.crossing.angle)
        .collect();
    let mut candidates = mutual.clone();
    let (rx, _) = x.root_power();
    let (ry, _) = y.root_power();
    for root in [&rx, &ry] {
        for cr in crossings(s, root, root, radius)? {
            candidates.push(cr.angle);
        }
    }
    for (p, q) in &pairs {
        let theta = p.crossing.angle.min(q.crossing.angle);
        rep.record(0.0);
        // exclude the pair's own two instances by angle identity
        let mut others: Vec<f64> = candidates
            .iter()
            .copied()
            .filter(|a| (a - p.crossing.angle).abs() > 1e-12 && (a - q.crossing.angle).abs() > 1e-12)
            .collect();
        others.sort_by(|a, b| a.partial_cmp(b).unwrap());
        match others.first() {
            Some(&best) if best < theta - 1e-9 => {}
            Some(&best) if best < theta + 1e-9 => {
                rep.notes
                    .push(format!("angle {best} only margin-equal to pair angle {theta}"));
            }
            _ => rep.fail(format!(
                "no crossing with angle below {theta} for pair at t = {} / {}",
                p.crossing.t, q.crossing.t
            )),
        }
    }
    Ok(rep)
}

// ---------------------------------------------------------------------------
// Reflection symmetry of canceling zigzags

/// The piecewise lift of "travel once around x, then once around y" from a
/// crossing: vertices alternate between crossing-type points and turn
/// points, invariant under the term transformation.
struct Zigzag {
    /// Vertices of period j at indices 2j (crossing point) and 2j+1 (turn).
    verts: Vec<PlanePoint>,
}

fn zigzag(s: &SurfaceSpec, bc: &BracketCrossing, translate: Option<&Isometry>, periods: i32) -> Zigzag {
    let x_mat = s.word_to_matrix(&bc.base_word);
    let term = s.word_to_matrix(&bc.term_word);
    let term_inv = term.inverse();
    let mut p0 = bc.crossing.point;
    let mut p1 = x_mat.apply(p0);
    if let Some(w) = translate {
        p0 = w.apply(p0);
        p1 = w.apply(p1);
    }
    let mut verts = Vec::new();
    for j in -periods..=periods {
        let mut a = p0;
        let mut b = p1;
        for _ in 0..j.abs() {
            let m = if j > 0 { &term } else { &term_inv };
            a = m.apply(a);
            b = m.apply(b);
        }
        verts.push(a);
        verts.push(b);
    }
    Zigzag { verts }
}

/// Conjugating word w with w·v·w⁻¹ = u, for words of the same class.
fn conjugator_between(u: &crate::words::Word, v: &crate::words::Word) -> crate::words::Word {
    fn standard_conjugator(w: &crate::words::Word) -> crate::words::Word {
        // w = prefix · core · prefix⁻¹ with core cyclically reduced, and
        // core = rot_i(canonical) = c[..i]⁻¹ · c · c[..i]; then
        // w = (prefix · c[..i]⁻¹) · c · (prefix · c[..i]⁻¹)⁻¹.
        let mut letters = w.letters().to_vec();
        let mut prefix = Vec::new();
        while letters.len() >= 2 && letters[0] == letters[letters.len() - 1].inverted() {
            prefix.push(letters[0]);
            letters.pop();
            letters.remove(0);
        }
        let core = crate::words::Word::reduce(letters.clone());
        let canon = CyclicWord::canonical(&core).expect("nonempty core");
        let n = canon.len();
        let rot = (0..n)
            .find(|&i| {
                (0..n).all(|k| canon.letters()[(i + k) % n] == letters[k])
            })
            .expect("core is a rotation of its canonical form");
        let head = crate::words::Word::reduce(prefix);
        let turn = crate::words::Word::reduce(canon.letters()[..rot].to_vec());
        head.concat(&turn.invert())
    }
    let wu = standard_conjugator(u);
    let wv = standard_conjugator(v);
    wu.concat(&wv.invert())
}

fn side_sign(g: &DirectedGeodesic, p: PlanePoint) -> f64 {
    match (g.from, g.to) {
        (BoundaryPoint::Finite(u), BoundaryPoint::Finite(v)) => {
            let c = (u + v) / 2.0;
            let r = (u - v).abs() / 2.0;
            ((p.x - c).hypot(p.y) - r).signum()
        }
        (BoundaryPoint::Finite(u), BoundaryPoint::Infinity)
        | (BoundaryPoint::Infinity, BoundaryPoint::Finite(u)) => (p.x - u).signum(),
        _ => unreachable!(),
    }
}

/// Report for one canceling pair: the reflections about the perpendiculars
/// 𝒰 and 𝒱 swap the two zigzags, and the two lines are ℓ/2 apart.
#[derive(Debug, Clone, Serialize)]
pub struct ReflectionPairReport {
    pub term: String,
    pub vertex_residual: f64,
    pub line_distance_residual: f64,
    /// Which strand type ("x" or "y") each of 𝒰, 𝒱 crosses on the two
    /// zigzags; the lemma's two possible configurations show up here.
    pub configuration: String,
    pub failures: Vec<String>,
}

/// Checks the reflection symmetry of a canceling pair.
pub fn check_reflection_symmetry(
    s: &SurfaceSpec,
    p: &BracketCrossing,
    q: &BracketCrossing,
) -> Result<ReflectionPairReport> {
    let mut failures = Vec::new();
    let term_dd = s.dd_word_matrix(&p.term_word);
    let term_ax = dd_axis(&term_dd)?.ok_or_else(|| {
        crate::Error::InvalidSurface("term axis beyond f64 resolution".into())
    })?;
    let term_len = dd_translation_length(&term_dd)?;

    // translate the q-zigzag onto the same term axis lift
    let w_word = conjugator_between(&p.term_word, &q.term_word);
    debug_assert_eq!(q.term_word.conjugate_by(&w_word), p.term_word);
    let w_mat = s.word_to_matrix(&w_word);

    let zp = zigzag(s, p, None, 3);
    let zq = zigzag(s, q, Some(&w_mat), 3);

    let p_pt = p.crossing.point;
    let q_pt = w_mat.apply(q.crossing.point);
    let dp = crate::hyperbolic::dist_to_geodesic(p_pt, &term_ax);
    let dq = crate::hyperbolic::dist_to_geodesic(q_pt, &term_ax);
    if (dp - dq).abs() > 1e-6 {
        failures.push(format!("crossing heights differ: {dp} vs {dq}"));
    }
    if side_sign(&term_ax, p_pt) != side_sign(&term_ax, q_pt) {
        failures.push("crossing lifts on opposite sides of the term axis".into());
    }

    let fp = foot_on_geodesic(p_pt, &term_ax);
    let fq = foot_on_geodesic(q_pt, &term_ax);
    let u_point = midpoint(fp, fq);
    let u_line = perpendicular_at(&term_ax, u_point)?;
    let v_point = point_at(
        &term_ax,
        param_of(&term_ax, u_point).expect("midpoint on axis") - term_len / 2.0,
    );
    let v_line = perpendicular_at(&term_ax, v_point)?;

    let mut vertex_residual = 0.0f64;
    for line in [&u_line, &v_line] {
        let rho = reflection_about(line);
        // one period of each zigzag must land on vertices of the other
        for (src, dst) in [(&zp, &zq), (&zq, &zp)] {
            let mid = src.verts.len() / 2 - 1;
            for v in &src.verts[mid..mid + 4] {
                let image = rho.apply(*v);
                let best = dst
                    .verts
                    .iter()
                    .map(|c| dist(image, *c))
                    .fold(f64::INFINITY, f64::min);
                vertex_residual = vertex_residual.max(best);
            }
        }
    }
    if vertex_residual > 1e-6 {
        failures.push(format!(
            "reflected vertices miss the other zigzag by {vertex_residual}"
        ));
    }

    let line_distance_residual = (dist(u_point, v_point) - term_len / 2.0).abs();
    if line_distance_residual > 1e-8 {
        failures.push(format!(
            "perpendicular distance residual {line_distance_residual}"
        ));
    }

    let classify_crossing = |line: &DirectedGeodesic, z: &Zigzag| -> String {
        let mut kinds = Vec::new();
        for k in 0..z.verts.len() - 1 {
            let a = z.verts[k];
            let b = z.verts[k + 1];
            if side_sign(line, a) != side_sign(line, b) {
                kinds.push(if k % 2 == 0 { "x" } else { "y" });
            }
        }
        kinds.join("")
    };
    let configuration = format!(
        "U:[{}|{}] V:[{}|{}]",
        classify_crossing(&u_line, &zp),
        classify_crossing(&u_line, &zq),
        classify_crossing(&v_line, &zp),
        classify_crossing(&v_line, &zq),
    );

    Ok(ReflectionPairReport {
        term: p.term_class.to_string(),
        vertex_residual,
        line_distance_residual,
        configuration,
        failures,
    })
}

/// Runs the reflection check over every canceling pair of [x, y].
pub fn check_reflection_symmetry_all(
    s: &SurfaceSpec,
    x: &CyclicWord,
    y: &CyclicWord,
    radius: usize,
) -> Result<VerificationReport> {
    let mut rep = VerificationReport::new(format!("reflection-symmetry [{x},{y}]"));
    for (p, q) in canceling_pairs(s, x, y, radius)? {
        let pair = check_reflection_symmetry(s, &p, &q)?;
        rep.record(pair.vertex_residual.max(pair.line_distance_residual));
        rep.notes
            .push(format!("term {}: {}", pair.term, pair.configuration));
        for f in pair.failures {
            rep.fail(format!("term {}: {f}", pair.term));
        }
    }
    if rep.instances == 0 {
        rep.notes.push("no canceling pairs (vacuous pass)".into());
    }
    Ok(rep)
}

// ---------------------------------------------------------------------------
// Randomized trials for the product-of-hyperbolics identities

fn random_linked_pair(rng: &mut ChaCha8Rng) -> (Isometry, Isometry) {
    loop {
        let mut pts: Vec<f64> = (0..4).map(|_| rng.gen_range(-5.0..5.0)).collect();
        pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
        if pts.windows(2).any(|w| w[1] - w[0] < 0.05) {
            continue;
        }
        let (mut ux, mut vx) = (pts[0], pts[2]);
        let (mut uy, mut vy) = (pts[1], pts[3]);
        if rng.gen() {
            std::mem::swap(&mut ux, &mut vx);
        }
        if rng.gen() {
            std::mem::swap(&mut uy, &mut vy);
        }
        let lx = rng.gen_range(0.4..3.5);
        let ly = rng.gen_range(0.4..3.5);
        let x = Isometry::translation_along(&DirectedGeodesic::between(ux, vx), lx);
        let y = Isometry::translation_along(&DirectedGeodesic::between(uy, vy), ly);
        return (x, y);
    }
}

/// Lemma-1 length identity on random hyperbolic pairs with linked axes:
/// the product length matches the cosine rule with α = π − forward angle.
pub fn lemma1_length_trials(trials: usize, seed: u64) -> VerificationReport {
    let mut rep = VerificationReport::new("lemma1-length");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for k in 0..trials {
        let (x, y) = random_linked_pair(&mut rng);
        let ax = x.axis().expect("hyperbolic");
        let ay = y.axis().expect("hyperbolic");
        let p = intersect(&ax, &ay).expect("distinct").expect("linked");
        let theta = crate::hyperbolic::forward_angle(&ax, &ay, p).expect("on both");
        let lx = x.translation_length().unwrap();
        let ly = y.translation_length().unwrap();
        let product = x.compose(&y);
        let direct = match product.translation_length() {
            Ok(l) => l,
            Err(e) => {
                rep.fail(format!("trial {k}: product not hyperbolic: {e}"));
                continue;
            }
        };
        let formula = crate::hyperbolic::beardon_length(lx, ly, std::f64::consts::PI - theta)
            .expect("crossing axes give hyperbolic product");
        let residual = (direct - formula).abs();
        rep.record(residual);
        if residual > 1e-8 {
            rep.fail(format!("trial {k}: |direct - formula| = {residual}"));
        }
    }
    rep
}

/// Lemma-1 axis identity: the product axis passes through the two
/// half-length points and translates by twice their distance, directed from
/// the y-side point to the x-side point.
pub fn lemma1_midpoint_trials(trials: usize, seed: u64) -> VerificationReport {
    let mut rep = VerificationReport::new("lemma1-midpoints");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for k in 0..trials {
        let (x, y) = random_linked_pair(&mut rng);
        let ax = x.axis().unwrap();
        let ay = y.axis().unwrap();
        let p = intersect(&ax, &ay).unwrap().unwrap();
        let lx = x.translation_length().unwrap();
        let ly = y.translation_length().unwrap();
        // product X·Y applies Y first: S sits half of ℓx ahead on the x-axis,
        // T half of ℓy behind on the y-axis
        let s_pt = point_at(&ax, param_of(&ax, p).unwrap() + lx / 2.0);
        let t_pt = point_at(&ay, param_of(&ay, p).unwrap() - ly / 2.0);
        let product = x.compose(&y);
        let axw = product.axis().unwrap();
        let lw = product.translation_length().unwrap();
        let r1 = crate::hyperbolic::dist_to_geodesic(s_pt, &axw);
        let r2 = crate::hyperbolic::dist_to_geodesic(t_pt, &axw);
        let r3 = (2.0 * dist(s_pt, t_pt) - lw).abs();
        let residual = r1.max(r2).max(r3);
        rep.record(residual);
        if residual > 1e-8 {
            rep.fail(format!("trial {k}: residual {residual}"));
        }
        let ps = param_of(&axw, s_pt);
        let pt = param_of(&axw, t_pt);
        match (ps, pt) {
            (Ok(ps), Ok(pt)) if ps > pt => {}
            _ => rep.fail(format!("trial {k}: axis not directed from T to S")),
        }
    }
    rep
}

/// Rotation decomposition X = R_P · R_S on random hyperbolic elements.
pub fn rotation_decomposition_trials(trials: usize, seed: u64) -> VerificationReport {
    let mut rep = VerificationReport::new("rotation-decomposition");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for k in 0..trials {
        let (x, _) = random_linked_pair(&mut rng);
        let ax = x.axis().unwrap();
        let l = x.translation_length().unwrap();
        let t = rng.gen_range(-2.0..2.0);
        let p = point_at(&ax, t);
        let s = point_at(&ax, t - l / 2.0);
        rep.record(0.0);
        match crate::hyperbolic::compose_rotations_check(&x, p, s) {
            Ok(true) => {}
            Ok(false) => rep.fail(format!("trial {k}: decomposition failed")),
            Err(e) => rep.fail(format!("trial {k}: {e}")),
        }
    }
    rep
}
