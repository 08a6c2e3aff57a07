//! The (λ, a) parameter map: experimental and theoretical bounds of the form
//! λ⁻¹ aᵖ ≷ bound, the gravitationally motivated effective λ, the thermal
//! bath relation and the free-electron radiation rate.
//!
//! Bounds are stored as raw CGS numbers (λ⁻¹ in s, a in cm), exactly as the
//! dimensionally informal inequalities are usually quoted. Each boundary is a
//! straight line of slope −p in (log₁₀ a, log₁₀ λ⁻¹).

use alloc::string::ToString;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;
use core::str::FromStr;

use num_traits::Float;

use crate::constants::{CslParams, CGS, ERG_PER_EV, E_CHARGE, M_ELECTRON};
use crate::error::{positive, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ConstraintId {
    /// Spontaneous radiation from Ge valence electrons.
    GeRadiation,
    /// Null result for rotational diffusion of π/2 in 45 minutes.
    RotNull,
    /// Superposed sphere states must collapse within human perception time.
    PerceptionTime,
    /// CSL diffusion must stay below the smallest discernible displacement.
    SmallDisplacement,
    /// Null result for translational diffusion at 10⁻³ of the GRW value.
    TransNull,
    /// Collapse field in equilibrium with a 2.7 K bath, γ ≥ 1.
    ThermalRelation,
    /// Spontaneous excitation of Ge nucleons.
    GeNucleon,
}

/// Columns c1..c5 of the map.
pub const FIG2_DEFAULT: [ConstraintId; 5] = [
    ConstraintId::GeRadiation,
    ConstraintId::RotNull,
    ConstraintId::PerceptionTime,
    ConstraintId::SmallDisplacement,
    ConstraintId::TransNull,
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Greater,
    Less,
}

/// λ⁻¹ a^`power` `relation` `bound`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstraintLine {
    pub id: ConstraintId,
    pub power: i32,
    pub relation: Relation,
    pub bound: f64,
    pub label: &'static str,
}

impl ConstraintId {
    pub const ALL: [ConstraintId; 7] = [
        ConstraintId::GeRadiation,
        ConstraintId::RotNull,
        ConstraintId::PerceptionTime,
        ConstraintId::SmallDisplacement,
        ConstraintId::TransNull,
        ConstraintId::ThermalRelation,
        ConstraintId::GeNucleon,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ConstraintId::GeRadiation => "ge-radiation",
            ConstraintId::RotNull => "rot-null",
            ConstraintId::PerceptionTime => "perception-time",
            ConstraintId::SmallDisplacement => "small-displacement",
            ConstraintId::TransNull => "trans-null",
            ConstraintId::ThermalRelation => "thermal-relation",
            ConstraintId::GeNucleon => "ge-nucleon",
        }
    }

    pub fn line(self) -> ConstraintLine {
        use ConstraintId::*;
        use Relation::*;
        let (power, relation, bound, label) = match self {
            GeRadiation => (2, Greater, 0.4, "Ge free-electron radiation"),
            RotNull => (4, Greater, 1e2, "null rotational diffusion"),
            PerceptionTime => (0, Less, 4e19, "collapse within perception time"),
            SmallDisplacement => (2, Less, 1.6e10, "smallest discernible displacement"),
            TransNull => (2, Greater, 1e12, "null translational diffusion"),
            ThermalRelation => (2, Greater, 1e3, "thermal bath, gamma >= 1"),
            GeNucleon => (4, Greater, 2e-15, "Ge nucleon excitation"),
        };
        ConstraintLine {
            id: self,
            power,
            relation,
            bound,
            label,
        }
    }
}

impl fmt::Display for ConstraintId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ConstraintId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ConstraintId::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::UnknownConstraint(s.to_string()))
    }
}

impl ConstraintLine {
    pub fn holds(&self, lambda_inv: f64, a: f64) -> bool {
        let v = lambda_inv * a.powi(self.power);
        match self.relation {
            Relation::Greater => v > self.bound,
            Relation::Less => v < self.bound,
        }
    }

    /// log₁₀ λ⁻¹ on the boundary at log₁₀ a.
    pub fn boundary_log_lambda_inv(&self, log10_a: f64) -> f64 {
        self.bound.log10() - self.power as f64 * log10_a
    }
}

pub fn evaluate_constraints(lambda_inv: f64, a: f64, which: &[ConstraintId]) -> Result<Vec<bool>> {
    positive("lambda_inv", lambda_inv)?;
    positive("a", a)?;
    Ok(which
        .iter()
        .map(|c| c.line().holds(lambda_inv, a))
        .collect())
}

/// As [`evaluate_constraints`], naming constraints by id string.
pub fn evaluate_named(lambda_inv: f64, a: f64, names: &[&str]) -> Result<Vec<bool>> {
    let ids = names
        .iter()
        .map(|n| n.parse())
        .collect::<Result<Vec<ConstraintId>>>()?;
    evaluate_constraints(lambda_inv, a, &ids)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GravityMode {
    /// Body of size ≈ a.
    Point,
    Sphere {
        radius: f64,
    },
    /// Disc of radius L turning about a diameter.
    Disc {
        radius: f64,
    },
}

/// Effective λ of gravitational collapse proposals, Gm²/(aħ), times (a/R)³
/// for a sphere or (a/L)⁵ for a rotating disc. Order of magnitude only: the
/// product λ·f (or λ·f_ROT) is what is returned for the extended bodies.
pub fn lambda_gravitational(a: f64, mode: GravityMode) -> Result<f64> {
    let a = positive("a", a)?;
    let base = CGS.g_newton * CGS.m_nucleon * CGS.m_nucleon / (a * CGS.hbar);
    Ok(match mode {
        GravityMode::Point => base,
        GravityMode::Sphere { radius } => base * (a / positive("R", radius)?).powi(3),
        GravityMode::Disc { radius } => base * (a / positive("L", radius)?).powi(5),
    })
}

/// The equality λ⁻¹a² = 10³γ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermalLine {
    pub gamma: f64,
}

impl ThermalLine {
    pub fn lambda_inv(&self, a: f64) -> f64 {
        1e3 * self.gamma / (a * a)
    }

    /// Normalized form (λ⁻¹/10¹⁶)(a/10⁻⁵)² − γ/10³, zero on the line.
    pub fn residual(&self, lambda_inv: f64, a: f64) -> f64 {
        lambda_inv / 1e16 * (a / 1e-5).powi(2) - self.gamma / 1e3
    }
}

pub fn thermal_relation(gamma: f64) -> Result<ThermalLine> {
    if !(gamma >= 1.0) || !gamma.is_finite() {
        return Err(Error::InvalidParameter {
            name: "gamma",
            reason: "must be >= 1",
        });
    }
    Ok(ThermalLine { gamma })
}

/// ħ²/(m a²) in eV.
pub fn localization_energy_ev(a: f64) -> f64 {
    CGS.hbar * CGS.hbar / (CGS.m_nucleon * a * a) / ERG_PER_EV
}

/// kT in eV.
pub fn thermal_energy_ev(temperature: f64) -> f64 {
    CGS.k_boltzmann * temperature / ERG_PER_EV
}

/// γ from kT ≈ 50γ ħ²/(ma²).
pub fn implied_gamma(temperature: f64, a: f64) -> f64 {
    thermal_energy_ev(temperature) / (50.0 * localization_energy_ev(a))
}

/// Photons radiated by a free electron shaken by the collapse field, per
/// second per keV at photon energy `energy_kev`:
/// λ (m_e/m)² e² ħ / (4π² a² m_e² c³ E).
pub fn fu_rate(csl: &CslParams, energy_kev: f64) -> Result<f64> {
    let e = positive("E", energy_kev)? * 1e3 * ERG_PER_EV;
    let mass_ratio = M_ELECTRON / CGS.m_nucleon;
    let per_erg = csl.lambda * mass_ratio * mass_ratio * E_CHARGE * E_CHARGE * CGS.hbar
        / (4.0 * PI * PI * csl.a * csl.a * M_ELECTRON * M_ELECTRON * CGS.c.powi(3) * e);
    Ok(per_erg * 1e3 * ERG_PER_EV)
}

pub const GE_ATOMS_PER_KG: f64 = 8.29e24;
pub const GE_FREE_ELECTRONS: f64 = 4.0;

/// [`fu_rate`] for the valence electrons of a germanium detector, in
/// counts/(keV kg day).
pub fn fu_detector_rate(csl: &CslParams, energy_kev: f64) -> Result<f64> {
    Ok(fu_rate(csl, energy_kev)?
        * GE_FREE_ELECTRONS
        * GE_ATOMS_PER_KG
        * crate::units::SECONDS_PER_DAY)
}

/// Points of one constraint boundary across the a-grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Boundary {
    pub id: ConstraintId,
    pub points: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConstraintMap {
    pub log10_a: Vec<f64>,
    pub log10_lambda_inv: Vec<f64>,
    pub ids: Vec<ConstraintId>,
    /// One entry per (a, λ⁻¹) point, a-major; each holds one flag per id.
    pub cells: Vec<Vec<bool>>,
    pub boundaries: Vec<Boundary>,
}

impl ConstraintMap {
    pub fn point_count(&self) -> usize {
        self.cells.len()
    }

    pub fn cell(&self, i_a: usize, i_l: usize) -> &[bool] {
        &self.cells[i_a * self.log10_lambda_inv.len() + i_l]
    }

    /// Whether some grid point satisfies every constraint in `subset`.
    pub fn region_nonempty(&self, subset: &[ConstraintId]) -> bool {
        let cols: Vec<usize> = subset
            .iter()
            .filter_map(|id| self.ids.iter().position(|x| x == id))
            .collect();
        self.cells.iter().any(|c| cols.iter().all(|&k| c[k]))
    }
}

/// Evaluates `ids` on every grid point. Grids are in log₁₀ and must be
/// nonempty; they are sorted before use.
pub fn fig2_dataset(
    log10_a: &[f64],
    log10_lambda_inv: &[f64],
    ids: &[ConstraintId],
) -> Result<ConstraintMap> {
    if log10_a.is_empty() || log10_lambda_inv.is_empty() || ids.is_empty() {
        return Err(Error::InvalidParameter {
            name: "grid",
            reason: "grids and constraint list must be nonempty",
        });
    }
    let mut la = log10_a.to_vec();
    let mut ll = log10_lambda_inv.to_vec();
    la.sort_by(f64::total_cmp);
    ll.sort_by(f64::total_cmp);
    let mut cells = Vec::with_capacity(la.len() * ll.len());
    for &x in &la {
        for &y in &ll {
            cells.push(evaluate_constraints(10f64.powf(y), 10f64.powf(x), ids)?);
        }
    }
    let boundaries = ids
        .iter()
        .map(|&id| {
            let line = id.line();
            Boundary {
                id,
                points: la
                    .iter()
                    .map(|&x| (x, line.boundary_log_lambda_inv(x)))
                    .collect(),
            }
        })
        .collect();
    Ok(ConstraintMap {
        log10_a: la,
        log10_lambda_inv: ll,
        ids: ids.to_vec(),
        cells,
        boundaries,
    })
}

/// Evenly spaced grid from `lo` to `hi` inclusive.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => alloc::vec![lo],
        _ => (0..n)
            .map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64)
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffusion::{csl_rms_rotation, qm_baseline_rotation};
    use crate::Body;
    use proptest::prelude::*;
    use ConstraintId::*;

    const GRW_POINT: (f64, f64) = (1e16, 1e-5);

    #[test]
    fn grw_point() {
        let (l, a) = GRW_POINT;
        let v = evaluate_constraints(l, a, &FIG2_DEFAULT).unwrap();
        assert_eq!(v, [true, false, true, true, false]);
        assert!(evaluate_constraints(l, a, &[GeNucleon]).unwrap()[0]);
    }

    #[test]
    fn unknown_id() {
        assert_eq!(
            evaluate_named(1.0, 1.0, &["ge-radiation", "warp-drive"]).unwrap_err(),
            Error::UnknownConstraint("warp-drive".into())
        );
        assert_eq!(evaluate_named(1e16, 1e-5, &["rot-null"]).unwrap(), [false]);
        for id in ConstraintId::ALL {
            assert_eq!(id.name().parse::<ConstraintId>().unwrap(), id);
        }
    }

    #[test]
    fn trans_null_conflicts_with_small_displacement() {
        let (t, s) = (TransNull.line(), SmallDisplacement.line());
        assert!(t.bound > s.bound && t.power == s.power);
    }

    #[test]
    fn map_regions() {
        let la = linspace(-8.0, 0.0, 81);
        let ll = linspace(0.0, 30.0, 121);
        let m = fig2_dataset(&la, &ll, &FIG2_DEFAULT).unwrap();
        assert_eq!(m.point_count(), 81 * 121);
        assert!(m.region_nonempty(&FIG2_DEFAULT[..4]));
        assert!(!m.region_nonempty(&FIG2_DEFAULT));
        assert_eq!(m.boundaries.len(), 5);
        assert!(fig2_dataset(&[], &ll, &FIG2_DEFAULT).is_err());
    }

    #[test]
    fn boundary_slopes() {
        for id in ConstraintId::ALL {
            let l = id.line();
            let slope = l.boundary_log_lambda_inv(1.0) - l.boundary_log_lambda_inv(0.0);
            assert!((slope + l.power as f64).abs() < 1e-12);
            assert!([0, 2, 4].contains(&l.power));
        }
    }

    #[test]
    fn gravitational_lambda() {
        let lg = lambda_gravitational(1e-5, GravityMode::Point).unwrap();
        assert!((lg / 2e-23 - 1.0).abs() < 0.2);
        assert!((lg / 1.77e-23 - 1.0).abs() < 0.01);
        let l2 = lambda_gravitational(2e-5, GravityMode::Point).unwrap();
        assert!((lg / l2 - 2.0).abs() < 1e-12);
        let s = lambda_gravitational(1e-5, GravityMode::Sphere { radius: 2e-5 }).unwrap();
        assert!((s / lg - 0.125).abs() < 1e-12);
        let d = lambda_gravitational(1e-5, GravityMode::Disc { radius: 2e-5 }).unwrap();
        assert!((d / lg - 1.0 / 32.0).abs() < 1e-12);
    }

    #[test]
    fn gravitational_rotation() {
        // With λ = λ_G and f_ROT ≈ 1 the coefficient is 7.7e-6, not quite 1e-5.
        let lg = lambda_gravitational(1e-5, GravityMode::Point).unwrap();
        let csl = CslParams::new(lg, 1e-5).unwrap();
        let coeff = csl_rms_rotation(&csl, 1.0, 1.0, 0.0).unwrap();
        assert!((coeff / 7.7e-6 - 1.0).abs() < 0.01);
        assert!(coeff / 1e-5 > 0.7 && coeff / 1e-5 < 1.0);
        let early = csl_rms_rotation(&csl, 1.0, 2700.0, 0.0).unwrap();
        let late = csl_rms_rotation(&csl, 1.0, 10800.0, 0.0).unwrap();
        assert!((early / 1.4 - 1.0).abs() < 0.35 && (late / 11.2 - 1.0).abs() < 0.35);
        let disc = Body::disc(2e-5, 0.5e-5, 1.0).unwrap();
        let qm = qm_baseline_rotation(&disc, 2700.0).unwrap();
        assert!((qm / 2.7 - 1.0).abs() < 0.1);
    }

    #[test]
    fn thermal_line() {
        let l = thermal_relation(1e3).unwrap();
        assert!((l.lambda_inv(1e-5) / 1e16 - 1.0).abs() < 1e-12);
        assert!(l.residual(1e16, 1e-5).abs() < 1e-12);
        assert!((thermal_relation(1.0).unwrap().lambda_inv(1e-5) / 1e13 - 1.0).abs() < 1e-12);
        assert!(thermal_relation(0.5).is_err());
    }

    #[test]
    fn thermal_energies() {
        assert!((thermal_energy_ev(2.7) / 2.5e-4 - 1.0).abs() < 0.1);
        assert!((localization_energy_ev(1e-5) / 4e-9 - 1.0).abs() < 0.1);
        let g = implied_gamma(2.7, 1e-5);
        assert!(g > 5e2 && g < 2e3, "{g}");
    }

    #[test]
    fn free_electron_radiation() {
        let r = fu_rate(&CslParams::GRW, 1.0).unwrap();
        assert!((r / 8.1e-38 - 1.0).abs() < 0.02, "{r}");
        let det = fu_detector_rate(&CslParams::GRW, 11.0).unwrap();
        assert!((det / 2.1e-8 - 1.0).abs() < 0.03, "{det}");
    }

    proptest! {
        #[test]
        fn monotone_in_lambda_inv(la in -8.0f64..0.0, l1 in 0.0f64..30.0, dl in 0.0f64..5.0) {
            let a = 10f64.powf(la);
            let lo = evaluate_constraints(10f64.powf(l1), a, &ConstraintId::ALL).unwrap();
            let hi = evaluate_constraints(10f64.powf(l1 + dl), a, &ConstraintId::ALL).unwrap();
            for (id, (x, y)) in ConstraintId::ALL.iter().zip(lo.iter().zip(&hi)) {
                match id.line().relation {
                    Relation::Greater => prop_assert!(!x || *y),
                    Relation::Less => prop_assert!(!y || *x),
                }
            }
        }
    }
}
