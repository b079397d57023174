//! Hyperbolic surfaces with geodesic boundary as Schottky groups.
//!
//! A surface is given by a free discrete group of hyperbolic isometries.
//! Freeness and discreteness are certified by the classical ping-pong
//! condition on disjoint boundary half-disks: generator i maps the exterior
//! of its source disk onto the interior of its target disk. Everything
//! downstream assumes a validated spec, which guarantees that every
//! nontrivial conjugacy class is represented by a closed geodesic.

use crate::dd::DdMat;
use crate::hyperbolic::{linked, Isometry, IsometryClass};
use crate::words::Word;
use crate::{Error, Result};
use serde::{Deserialize, Serialize};

/// A closed half-disk resting on the boundary line.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Disk {
    pub center: f64,
    pub radius: f64,
}

/// The two half-disks paired by one generator: the generator maps the
/// exterior of `source` onto the interior of `target`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct DiskPair {
    pub source: Disk,
    pub target: Disk,
}

/// A concrete surface: rank, generator matrices, and optional Schottky disk
/// data making the ping-pong condition checkable.
#[derive(Debug, Clone)]
pub struct SurfaceSpec {
    rank: u16,
    generators: Vec<Isometry>,
    label: String,
    disks: Option<Vec<DiskPair>>,
}

/// Outcome of validating a surface spec.
#[derive(Debug, Clone, Serialize)]
pub struct ValidationReport {
    pub label: String,
    pub rank: u16,
    pub generator_lengths: Vec<f64>,
    pub disks_checked: bool,
    pub ping_pong_max_residual: f64,
    /// Which pairs of generator axes cross in the plane (the i(a,b)-style
    /// pattern of single lifts).
    pub axis_crossings: Vec<(usize, usize, bool)>,
}

impl SurfaceSpec {
    pub fn new(
        rank: u16,
        generators: Vec<Isometry>,
        label: impl Into<String>,
        disks: Option<Vec<DiskPair>>,
    ) -> Self {
        assert_eq!(generators.len(), rank as usize);
        SurfaceSpec {
            rank,
            generators,
            label: label.into(),
            disks,
        }
    }

    pub fn rank(&self) -> u16 {
        self.rank
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn generators(&self) -> &[Isometry] {
        &self.generators
    }

    pub fn disks(&self) -> Option<&[DiskPair]> {
        self.disks.as_deref()
    }

    /// Parses word text and rejects letters beyond this surface's rank.
    pub fn parse_word(&self, text: &str) -> Result<Word> {
        let w = Word::parse(text)?;
        if let Some(m) = w.max_index() {
            if m >= self.rank {
                return Err(Error::Parse(format!(
                    "letter {:?} exceeds surface rank {}",
                    crate::words::Letter::new(m, false).to_char(),
                    self.rank
                )));
            }
        }
        Ok(w)
    }

    /// Homomorphic image of a word: the product of generator matrices.
    ///
    /// Folded in double-double precision and rounded once at the end, so the
    /// result is the correctly rounded product even for long words.
    pub fn word_to_matrix(&self, w: &Word) -> Isometry {
        let m = self.dd_word_matrix(w);
        Isometry {
            a: m.a.to_f64(),
            b: m.b.to_f64(),
            c: m.c.to_f64(),
            d: m.d.to_f64(),
        }
    }

    /// Full-precision fold of a word, for trace/axis extraction on long
    /// conjugates.
    pub fn dd_word_matrix(&self, w: &Word) -> DdMat {
        let mut m = DdMat::IDENTITY;
        for l in w.letters() {
            assert!(
                (l.index as usize) < self.generators.len(),
                "letter beyond rank"
            );
            let g = &self.generators[l.index as usize];
            let gm = DdMat::from_f64(g.a, g.b, g.c, g.d);
            let gm = if l.inverse { gm.inverse_unimodular() } else { gm };
            m = m.mul(&gm);
        }
        m
    }

    /// Checks hyperbolicity of the generators and the ping-pong condition,
    /// failing on the first violated condition.
    pub fn validate(&self) -> Result<ValidationReport> {
        if self.rank < 2 {
            return Err(Error::InvalidSurface(format!("rank {} < 2", self.rank)));
        }
        let mut generator_lengths = Vec::new();
        for (i, g) in self.generators.iter().enumerate() {
            if g.classify() != IsometryClass::Hyperbolic {
                return Err(Error::InvalidSurface(format!(
                    "generator {i} is not hyperbolic (trace {})",
                    g.trace()
                )));
            }
            generator_lengths.push(g.translation_length()?);
        }
        let mut max_residual = 0.0_f64;
        let disks_checked = if let Some(pairs) = &self.disks {
            if pairs.len() != self.rank as usize {
                return Err(Error::InvalidSurface(format!(
                    "{} disk pairs for rank {}",
                    pairs.len(),
                    self.rank
                )));
            }
            let mut all: Vec<Disk> = Vec::new();
            for p in pairs {
                all.push(p.source);
                all.push(p.target);
            }
            for d in &all {
                if !(d.radius > 0.0) {
                    return Err(Error::InvalidSurface("disk with nonpositive radius".into()));
                }
            }
            for i in 0..all.len() {
                for j in (i + 1)..all.len() {
                    let gap =
                        (all[i].center - all[j].center).abs() - (all[i].radius + all[j].radius);
                    if gap <= 1e-9 {
                        return Err(Error::InvalidSurface(format!(
                            "disks {i} and {j} are not disjoint (gap {gap})"
                        )));
                    }
                }
            }
            for (i, pair) in pairs.iter().enumerate() {
                let r = ping_pong_residual(&self.generators[i], pair, &all)?;
                max_residual = max_residual.max(r);
                if max_residual > 1e-9 {
                    return Err(Error::InvalidSurface(format!(
                        "generator {i} fails ping-pong (residual {max_residual})"
                    )));
                }
            }
            true
        } else {
            false
        };
        let mut axis_crossings = Vec::new();
        for i in 0..self.generators.len() {
            for j in (i + 1)..self.generators.len() {
                let ai = self.generators[i].axis()?;
                let aj = self.generators[j].axis()?;
                axis_crossings.push((i, j, linked(&ai, &aj)));
            }
        }
        Ok(ValidationReport {
            label: self.label.clone(),
            rank: self.rank,
            generator_lengths,
            disks_checked,
            ping_pong_max_residual: max_residual,
            axis_crossings,
        })
    }
}

/// Residual of "g maps ∂(source) onto ∂(target)", plus a strict check that
/// sampled exterior boundary points land inside the target disk.
fn ping_pong_residual(g: &Isometry, pair: &DiskPair, all: &[Disk]) -> Result<f64> {
    let (s, t) = (pair.source, pair.target);
    let mut residual = 0.0_f64;
    for k in 0..=16 {
        let theta = std::f64::consts::PI * (k as f64 + 0.5) / 17.0;
        let z = crate::hyperbolic::PlanePoint::new(
            s.center + s.radius * theta.cos(),
            s.radius * theta.sin(),
        );
        let w = g.apply(z);
        residual = residual.max(((w.x - t.center).hypot(w.y) - t.radius).abs());
    }
    let mut samples = vec![];
    for d in all {
        samples.push(d.center - d.radius - 0.5);
        samples.push(d.center + d.radius + 0.5);
    }
    let lo = all
        .iter()
        .map(|d| d.center - d.radius)
        .fold(f64::INFINITY, f64::min);
    let hi = all
        .iter()
        .map(|d| d.center + d.radius)
        .fold(f64::NEG_INFINITY, f64::max);
    samples.push(lo - 50.0);
    samples.push(hi + 50.0);
    for x in samples {
        if (x - s.center).abs() <= s.radius {
            continue;
        }
        match g.apply_boundary(crate::hyperbolic::BoundaryPoint::Finite(x)) {
            crate::hyperbolic::BoundaryPoint::Finite(y) => {
                let overshoot = (y - t.center).abs() - t.radius;
                if overshoot > 0.0 {
                    return Err(Error::InvalidSurface(format!(
                        "exterior point {x} maps outside the target disk by {overshoot}"
                    )));
                }
            }
            crate::hyperbolic::BoundaryPoint::Infinity => {
                return Err(Error::InvalidSurface(format!(
                    "exterior point {x} maps to infinity"
                )))
            }
        }
    }
    Ok(residual)
}

/// The isometry pairing two boundary circles, exterior of the first onto the
/// interior of the second: z ↦ c₂ − r₁r₂/(z − c₁).
fn pairing_isometry(source: Disk, target: Disk) -> Isometry {
    Isometry::new(
        target.center,
        -source.radius * target.radius - source.center * target.center,
        1.0,
        -source.center,
    )
    .expect("positive determinant r1*r2")
}

fn scaled_radius(half_width: f64, param: f64) -> f64 {
    // translation length scales linearly in param: cosh(l/2) = half_width/r
    let l0_half = half_width.acosh();
    half_width / (param * l0_half).cosh()
}

/// Built-in surfaces.
///
/// * `"pants"` — rank 2, disk pairs side by side; the generator axes are
///   disjoint and `a`, `b`, `ab` are the three boundary classes.
/// * `"holed-torus"` — rank 2, interleaved disk pairs; the generator
///   geodesics cross exactly once and `abAB` is boundary parallel.
///
/// `params` scales translation lengths per generator: empty means 1, a
/// single value applies to all generators. The result is validated, so
/// parameters that make the disks collide are rejected.
pub fn builtin(name: &str, params: &[f64]) -> Result<SurfaceSpec> {
    let (centers, half_width, label): ([(f64, f64); 2], f64, &str) = match name {
        "pants" => ([(-2.0, 2.0), (6.0, 10.0)], 2.0, "pants"),
        "holed-torus" => ([(-6.0, 2.0), (-2.0, 6.0)], 4.0, "holed-torus"),
        _ => return Err(Error::UnknownSurface(name.to_string())),
    };
    let param_for = |i: usize| -> f64 {
        match params.len() {
            0 => 1.0,
            1 => params[0],
            _ => params.get(i).copied().unwrap_or(1.0),
        }
    };
    let mut generators = Vec::new();
    let mut pairs = Vec::new();
    for (i, (c_src, c_tgt)) in centers.iter().enumerate() {
        let p = param_for(i);
        if !(p.is_finite() && p > 0.0) {
            return Err(Error::InvalidSurface(format!("bad length parameter {p}")));
        }
        let r = scaled_radius(half_width, p);
        let source = Disk {
            center: *c_src,
            radius: r,
        };
        let target = Disk {
            center: *c_tgt,
            radius: r,
        };
        generators.push(pairing_isometry(source, target));
        pairs.push(DiskPair { source, target });
    }
    let spec = SurfaceSpec::new(2, generators, label, Some(pairs));
    spec.validate()?;
    Ok(spec)
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    label: Option<String>,
    rank: u16,
    /// Row-major [a, b, c, d] per generator.
    generators: Vec<[f64; 4]>,
    disks: Option<Vec<ConfigDisk>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigDisk {
    generator: usize,
    source_center: f64,
    source_radius: f64,
    target_center: f64,
    target_radius: f64,
}

/// Parses and validates a surface config in TOML form.
///
/// Schema: `rank` (integer ≥ 2), `generators` (list of row-major 2×2
/// matrices `[a, b, c, d]` with positive determinant, one per generator),
/// optional `label`, optional `[[disks]]` entries with fields `generator`,
/// `source_center`, `source_radius`, `target_center`, `target_radius`.
/// Unknown fields are rejected.
pub fn from_config_str(text: &str) -> Result<SurfaceSpec> {
    let cfg: ConfigFile = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
    if cfg.generators.len() != cfg.rank as usize {
        return Err(Error::Config(format!(
            "{} generators for rank {}",
            cfg.generators.len(),
            cfg.rank
        )));
    }
    let mut generators = Vec::new();
    for m in &cfg.generators {
        generators.push(Isometry::new(m[0], m[1], m[2], m[3])?);
    }
    let disks = match cfg.disks {
        None => None,
        Some(list) => {
            if list.len() != cfg.rank as usize {
                return Err(Error::Config(format!(
                    "{} disk entries for rank {}",
                    list.len(),
                    cfg.rank
                )));
            }
            let mut pairs = vec![None; cfg.rank as usize];
            for d in list {
                if d.generator >= cfg.rank as usize {
                    return Err(Error::Config(format!(
                        "disk entry for generator {} beyond rank",
                        d.generator
                    )));
                }
                if pairs[d.generator].is_some() {
                    return Err(Error::Config(format!(
                        "duplicate disk entry for generator {}",
                        d.generator
                    )));
                }
                pairs[d.generator] = Some(DiskPair {
                    source: Disk {
                        center: d.source_center,
                        radius: d.source_radius,
                    },
                    target: Disk {
                        center: d.target_center,
                        radius: d.target_radius,
                    },
                });
            }
            Some(pairs.into_iter().map(|p| p.unwrap()).collect())
        }
    };
    let spec = SurfaceSpec::new(
        cfg.rank,
        generators,
        cfg.label.unwrap_or_else(|| "custom".to_string()),
        disks,
    );
    spec.validate()?;
    Ok(spec)
}

/// Loads and validates a surface config file.
pub fn load_config(path: &std::path::Path) -> Result<SurfaceSpec> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
    from_config_str(&text)
}
