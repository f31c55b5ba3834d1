//! Closed-form energies of the separated internal Hamiltonian.
//!
//! In Jacobi coordinates the internal Hamiltonian splits into two ordinary
//! oscillators (X₁, X₃) and one singular oscillator (X₂) carrying the
//! repulsive `g₁²/(6X₂²)` term. Every energy here is linear in ω.

use std::fmt;

use thiserror::Error;

/// Merge tolerance for closed-form levels, in units of ω.
pub const LEVEL_MERGE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("omega must be finite and positive, got {0}")]
    InvalidOmega(f64),
    #[error("g1 squared must be finite and nonnegative, got {0}")]
    InvalidCoupling(f64),
    #[error("SHO offset must be 1/2 or 1, got {0}")]
    InvalidOffset(f64),
    #[error("sector multiplicity must be 1 or 2, got {0}")]
    InvalidSectorMultiplicity(u32),
}

/// Physical couplings of the model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    omega: f64,
    g1_squared: f64,
}

impl ModelParams {
    pub fn new(omega: f64, g1_squared: f64) -> Result<Self, ModelError> {
        if !(omega.is_finite() && omega > 0.0) {
            return Err(ModelError::InvalidOmega(omega));
        }
        if !(g1_squared.is_finite() && g1_squared >= 0.0) {
            return Err(ModelError::InvalidCoupling(g1_squared));
        }
        Ok(Self { omega, g1_squared })
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn g1_squared(&self) -> f64 {
        self.g1_squared
    }

    /// `δ = sqrt(1/4 + g₁²/3)`, the shift carried by every SHO level.
    pub fn delta(&self) -> f64 {
        (0.25 + self.g1_squared / 3.0).sqrt()
    }

    pub fn derived(&self) -> DerivedConstants {
        DerivedConstants {
            delta: self.delta(),
        }
    }

    pub fn with_omega(&self, omega: f64) -> Result<Self, ModelError> {
        Self::new(omega, self.g1_squared)
    }

    pub fn with_g1_squared(&self, g1_squared: f64) -> Result<Self, ModelError> {
        Self::new(self.omega, g1_squared)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedConstants {
    pub delta: f64,
}

/// Quantum numbers of the Jacobi-coordinate product state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QuantumTriple {
    pub n1: u32,
    pub n2: u32,
    pub n3: u32,
}

impl QuantumTriple {
    pub const fn new(n1: u32, n2: u32, n3: u32) -> Self {
        Self { n1, n2, n3 }
    }

    /// `N = n1 + n3 + 2·n2`; the energy depends on the triple only through N.
    pub fn total_quanta(&self) -> u32 {
        self.n1 + self.n3 + 2 * self.n2
    }
}

impl fmt::Display for QuantumTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.n1, self.n2, self.n3)
    }
}

/// Radial, θ-channel and φ-channel labels of the spherical route.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SphericalQuantum {
    pub n_r: u32,
    pub l: u32,
    pub m: u32,
}

impl SphericalQuantum {
    pub const fn new(n_r: u32, l: u32, m: u32) -> Self {
        Self { n_r, l, m }
    }

    pub fn total_quanta(&self) -> u32 {
        2 * self.n_r + self.l + self.m
    }
}

impl fmt::Display for SphericalQuantum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(n={},l={},m={})", self.n_r, self.l, self.m)
    }
}

/// Additive constant in the SHO level formula `ω(2n + offset + δ)`.
///
/// `Half` is the constant as printed in the source formula; `One` is the
/// value forced by the half-line Dirichlet limit at g₁² = 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ShoOffset {
    Half,
    One,
}

impl ShoOffset {
    pub const CANDIDATES: [ShoOffset; 2] = [ShoOffset::Half, ShoOffset::One];

    pub fn value(self) -> f64 {
        match self {
            ShoOffset::Half => 0.5,
            ShoOffset::One => 1.0,
        }
    }
}

impl TryFrom<f64> for ShoOffset {
    type Error = ModelError;

    fn try_from(value: f64) -> Result<Self, Self::Error> {
        if value == 0.5 {
            Ok(ShoOffset::Half)
        } else if value == 1.0 {
            Ok(ShoOffset::One)
        } else {
            Err(ModelError::InvalidOffset(value))
        }
    }
}

impl fmt::Display for ShoOffset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ShoOffset::Half => f.write_str("1/2"),
            ShoOffset::One => f.write_str("1"),
        }
    }
}

/// Relation between the θ-channel eigenvalue k² and the radial exponent s.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RadialRule {
    /// `s = (sqrt(k² + 1) - 1)/2`, as printed.
    Published,
    /// `s(s + 1) = k²`, i.e. `s = (sqrt(4k² + 1) - 1)/2`.
    Candidate,
}

impl RadialRule {
    pub const CANDIDATES: [RadialRule; 2] = [RadialRule::Published, RadialRule::Candidate];

    pub fn name(self) -> &'static str {
        match self {
            RadialRule::Published => "published",
            RadialRule::Candidate => "candidate",
        }
    }
}

impl fmt::Display for RadialRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for RadialRule {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "published" => Ok(RadialRule::Published),
            "candidate" => Ok(RadialRule::Candidate),
            other => Err(format!("unknown radial rule `{other}`")),
        }
    }
}

/// Number of mirror copies of each level: the barrier at X₂ = 0 splits the
/// line into two half-lines.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum SectorMultiplicity {
    #[default]
    Single,
    Double,
}

impl SectorMultiplicity {
    pub fn factor(self) -> u32 {
        match self {
            SectorMultiplicity::Single => 1,
            SectorMultiplicity::Double => 2,
        }
    }
}

impl TryFrom<u32> for SectorMultiplicity {
    type Error = ModelError;

    fn try_from(value: u32) -> Result<Self, Self::Error> {
        match value {
            1 => Ok(SectorMultiplicity::Single),
            2 => Ok(SectorMultiplicity::Double),
            other => Err(ModelError::InvalidSectorMultiplicity(other)),
        }
    }
}

/// `ω(n + 1/2)`.
pub fn ho_energy(n: u32, params: &ModelParams) -> f64 {
    params.omega * (f64::from(n) + 0.5)
}

/// SHO level with the additive constant exactly as printed: `ω(2n + 1/2 + δ)`.
pub fn sho_energy_published(n: u32, params: &ModelParams) -> f64 {
    sho_energy_resolved(n, params, ShoOffset::Half)
}

/// `ω(2n + offset + δ)`.
pub fn sho_energy_resolved(n: u32, params: &ModelParams, offset: ShoOffset) -> f64 {
    params.omega * (2.0 * f64::from(n) + offset.value() + params.delta())
}

/// `E_{n1} + E^{SHO}_{n2} + E_{n3}`.
pub fn composite_energy(t: QuantumTriple, params: &ModelParams, offset: ShoOffset) -> f64 {
    ho_energy(t.n1, params) + sho_energy_resolved(t.n2, params, offset) + ho_energy(t.n3, params)
}

/// Radial level `ω(2n + s + 3/2)` with `s = (sqrt(k² + 1) - 1)/2`.
///
/// # Panics
/// If `k_squared` is negative.
pub fn radial_energy_published(n: u32, k_squared: f64, params: &ModelParams) -> f64 {
    radial_energy(n, k_squared, params, RadialRule::Published)
}

/// Radial level `ω(2n + s + 3/2)` with `s(s + 1) = k²`.
///
/// # Panics
/// If `k_squared` is negative.
pub fn radial_energy_candidate(n: u32, k_squared: f64, params: &ModelParams) -> f64 {
    radial_energy(n, k_squared, params, RadialRule::Candidate)
}

pub fn radial_energy(n: u32, k_squared: f64, params: &ModelParams, rule: RadialRule) -> f64 {
    assert!(k_squared >= 0.0, "k² must be nonnegative, got {k_squared}");
    let s = match rule {
        RadialRule::Published => 0.5 * ((k_squared + 1.0).sqrt() - 1.0),
        RadialRule::Candidate => 0.5 * ((4.0 * k_squared + 1.0).sqrt() - 1.0),
    };
    params.omega * (2.0 * f64::from(n) + s + 1.5)
}

/// Rescale an energy computed at ω = 1 to frequency `omega`.
pub fn scale_energy(e_at_unit_omega: f64, omega: f64) -> f64 {
    omega * e_at_unit_omega
}

/// `dE^{SHO}/d(g₁²) = ω/(6δ)`, the same for every n₂ and offset.
pub fn hf_derivative_closed_form(_n2: u32, params: &ModelParams) -> f64 {
    params.omega / (6.0 * params.delta())
}

/// A group of quantum triples sharing one energy.
#[derive(Debug, Clone, PartialEq)]
pub struct EnergyLevel {
    pub value: f64,
    pub total_quanta: u32,
    /// `members.len()` times the sector multiplicity.
    pub degeneracy: u32,
    pub members: Vec<QuantumTriple>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumTable {
    pub levels: Vec<EnergyLevel>,
    pub params: ModelParams,
    pub cutoff: u32,
    pub offset: ShoOffset,
    pub sector_multiplicity: SectorMultiplicity,
}

impl SpectrumTable {
    /// Every level value repeated by its degeneracy, ascending.
    pub fn expanded_values(&self) -> Vec<f64> {
        self.levels
            .iter()
            .flat_map(|l| std::iter::repeat_n(l.value, l.degeneracy as usize))
            .collect()
    }

    pub fn degeneracies(&self) -> Vec<u32> {
        self.levels.iter().map(|l| l.degeneracy).collect()
    }
}

/// Every triple with `n1 + n3 + 2·n2 ≤ cutoff`, in (N, n2, n1) order.
pub fn triples_up_to(cutoff: u32) -> Vec<QuantumTriple> {
    let mut out = Vec::new();
    for total in 0..=cutoff {
        for n2 in 0..=total / 2 {
            let rest = total - 2 * n2;
            for n1 in 0..=rest {
                out.push(QuantumTriple::new(n1, n2, rest - n1));
            }
        }
    }
    out
}

/// Closed-form spectrum up to `cutoff` total quanta, with degenerate triples
/// merged into single levels.
pub fn enumerate_spectrum(
    params: &ModelParams,
    cutoff: u32,
    offset: ShoOffset,
    sectors: SectorMultiplicity,
) -> SpectrumTable {
    let mut states: Vec<(f64, QuantumTriple)> = triples_up_to(cutoff)
        .into_iter()
        .map(|t| (composite_energy(t, params, offset), t))
        .collect();
    states.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));

    let merge = LEVEL_MERGE_TOLERANCE * params.omega;
    let mut levels: Vec<EnergyLevel> = Vec::new();
    for (value, triple) in states {
        match levels.last_mut() {
            Some(level) if (value - level.value).abs() <= merge => level.members.push(triple),
            _ => levels.push(EnergyLevel {
                value,
                total_quanta: triple.total_quanta(),
                degeneracy: 0,
                members: vec![triple],
            }),
        }
    }
    for level in &mut levels {
        level.degeneracy = level.members.len() as u32 * sectors.factor();
    }

    SpectrumTable {
        levels,
        params: *params,
        cutoff,
        offset,
        sector_multiplicity: sectors,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(omega: f64, g: f64) -> ModelParams {
        ModelParams::new(omega, g).unwrap()
    }

    #[test]
    fn rejects_bad_params() {
        assert!(ModelParams::new(0.0, 1.0).is_err());
        assert!(ModelParams::new(-1.0, 1.0).is_err());
        assert!(ModelParams::new(1.0, -0.1).is_err());
        assert!(ModelParams::new(f64::NAN, 1.0).is_err());
        assert!(ModelParams::new(1.0, f64::INFINITY).is_err());
    }

    #[test]
    fn delta_is_half_at_zero_coupling() {
        assert_eq!(p(1.0, 0.0).delta(), 0.5);
        assert!(p(1.0, 1e-6).delta() > 0.5);
        assert!((p(1.0, 3.0).derived().delta - 5f64.sqrt() / 2.0).abs() < 1e-15);
    }

    #[test]
    fn ho_values() {
        assert_eq!(ho_energy(0, &p(1.0, 0.0)), 0.5);
        assert_eq!(ho_energy(3, &p(2.0, 0.0)), 7.0);
        assert_eq!(ho_energy(0, &p(0.5, 0.0)), 0.25);
    }

    #[test]
    fn sho_published_values() {
        let e = sho_energy_published(0, &p(1.0, 3.0));
        assert!((e - (0.5 + 5f64.sqrt() / 2.0)).abs() < 1e-14);
        assert!((e - 1.618034).abs() < 1e-6);
        assert_eq!(sho_energy_published(0, &p(1.0, 0.0)), 1.0);
        assert_eq!(sho_energy_published(2, &p(1.0, 0.0)), 5.0);
    }

    #[test]
    fn sho_resolved_values() {
        assert_eq!(sho_energy_resolved(0, &p(1.0, 0.0), ShoOffset::One), 1.5);
        assert_eq!(sho_energy_resolved(1, &p(1.0, 0.0), ShoOffset::One), 3.5);
        let e = sho_energy_resolved(0, &p(1.0, 3.0), ShoOffset::One);
        assert!((e - 2.118034).abs() < 1e-6);
    }

    #[test]
    fn offset_candidates_only() {
        assert_eq!(ShoOffset::try_from(0.5).unwrap(), ShoOffset::Half);
        assert_eq!(ShoOffset::try_from(1.0).unwrap(), ShoOffset::One);
        assert_eq!(
            ShoOffset::try_from(0.75),
            Err(ModelError::InvalidOffset(0.75))
        );
        assert!(SectorMultiplicity::try_from(3).is_err());
    }

    #[test]
    fn composite_values() {
        let o = ShoOffset::One;
        assert_eq!(
            composite_energy(QuantumTriple::new(0, 0, 0), &p(1.0, 0.0), o),
            2.5
        );
        assert_eq!(
            composite_energy(QuantumTriple::new(1, 0, 1), &p(1.0, 0.0), o),
            4.5
        );
        let e = composite_energy(QuantumTriple::new(0, 1, 0), &p(1.0, 3.0), o);
        assert!((e - (4.0 + 5f64.sqrt() / 2.0)).abs() < 1e-14);
    }

    #[test]
    fn radial_values() {
        let unit = p(1.0, 0.0);
        assert_eq!(radial_energy_published(0, 0.0, &unit), 1.5);
        let e = radial_energy_published(0, 2.0, &unit);
        assert!((e - (1.5 + (3f64.sqrt() - 1.0) / 2.0)).abs() < 1e-14);
        assert_eq!(radial_energy_published(1, 0.0, &p(2.0, 0.0)), 7.0);

        assert_eq!(radial_energy_candidate(0, 0.0, &unit), 1.5);
        assert_eq!(radial_energy_candidate(0, 2.0, &unit), 2.5);
        assert_eq!(radial_energy_candidate(0, 6.0, &unit), 3.5);
    }

    #[test]
    #[should_panic]
    fn radial_rejects_negative_k_squared() {
        radial_energy_candidate(0, -1.0, &p(1.0, 0.0));
    }

    #[test]
    fn scaling_examples() {
        assert_eq!(scale_energy(2.5, 3.0), 7.5);
        assert_eq!(scale_energy(1.618034, 1.0), 1.618034);
        let t = QuantumTriple::new(0, 0, 0);
        let unit = composite_energy(t, &p(1.0, 3.0), ShoOffset::One);
        let direct = composite_energy(t, &p(2.0, 3.0), ShoOffset::One);
        assert!((scale_energy(unit, 2.0) - direct).abs() < 1e-14);
        assert!((direct - 2.0 * (2.0 + 5f64.sqrt() / 2.0)).abs() < 1e-14);
    }

    #[test]
    fn hf_closed_form_values() {
        assert!((hf_derivative_closed_form(0, &p(1.0, 0.0)) - 1.0 / 3.0).abs() < 1e-15);
        let e = hf_derivative_closed_form(0, &p(1.0, 3.0));
        assert!((e - 1.0 / (3.0 * 5f64.sqrt())).abs() < 1e-15);
        assert!((e - 0.149071).abs() < 1e-6);
        assert!((hf_derivative_closed_form(4, &p(2.0, 3.0)) - 0.298142).abs() < 1e-6);
    }

    /// Brute force over a box, independent of `triples_up_to`.
    fn brute_force_count(total: u32) -> u32 {
        let mut count = 0;
        for n1 in 0..=total {
            for n2 in 0..=total {
                for n3 in 0..=total {
                    if n1 + n3 + 2 * n2 == total {
                        count += 1;
                    }
                }
            }
        }
        count
    }

    #[test]
    fn degeneracy_sequence() {
        let params = p(1.0, 3.0);
        let single = enumerate_spectrum(&params, 0, ShoOffset::One, SectorMultiplicity::Single);
        assert_eq!(single.levels.len(), 1);
        assert_eq!(single.levels[0].degeneracy, 1);

        let table = enumerate_spectrum(&params, 4, ShoOffset::One, SectorMultiplicity::Single);
        let expected: Vec<u32> = (0..=4).map(brute_force_count).collect();
        assert_eq!(expected, vec![1, 2, 4, 6, 9]);
        assert_eq!(table.degeneracies(), expected);

        let doubled = enumerate_spectrum(&params, 4, ShoOffset::One, SectorMultiplicity::Double);
        assert_eq!(doubled.degeneracies(), vec![2, 4, 8, 12, 18]);
    }

    #[test]
    fn degeneracy_identity_up_to_fifty() {
        let table =
            enumerate_spectrum(&p(1.0, 1.0), 50, ShoOffset::One, SectorMultiplicity::Single);
        assert_eq!(table.levels.len(), 51);
        for level in &table.levels {
            let n = level.total_quanta;
            let formula: u32 = (0..=n / 2).map(|n2| n - 2 * n2 + 1).sum();
            assert_eq!(level.degeneracy, formula);
            assert_eq!(level.degeneracy, brute_force_count(n));
        }
    }

    #[test]
    fn published_and_candidate_radial_agree_only_at_zero() {
        let params = p(1.0, 0.0);
        for n in 0..5 {
            assert_eq!(
                radial_energy_published(n, 0.0, &params),
                radial_energy_candidate(n, 0.0, &params)
            );
            assert_ne!(
                radial_energy_published(n, 0.5, &params),
                radial_energy_candidate(n, 0.5, &params)
            );
        }
    }

    proptest! {
        #[test]
        fn hf_derivative_positive(omega in 1e-3f64..1e3, g in 0f64..1e4, n2 in 0u32..20) {
            prop_assert!(hf_derivative_closed_form(n2, &p(omega, g)) > 0.0);
        }

        #[test]
        fn omega_scaling(omega in 1e-2f64..1e2, g in 0f64..50.0, n in 0u32..30, k2 in 0f64..40.0) {
            let unit = p(1.0, g);
            let at = p(omega, g);
            let t = QuantumTriple::new(n, n / 2, n / 3);
            let pairs = [
                (ho_energy(n, &unit), ho_energy(n, &at)),
                (sho_energy_published(n, &unit), sho_energy_published(n, &at)),
                (sho_energy_resolved(n, &unit, ShoOffset::One), sho_energy_resolved(n, &at, ShoOffset::One)),
                (composite_energy(t, &unit, ShoOffset::One), composite_energy(t, &at, ShoOffset::One)),
                (radial_energy_published(n, k2, &unit), radial_energy_published(n, k2, &at)),
                (radial_energy_candidate(n, k2, &unit), radial_energy_candidate(n, k2, &at)),
                (hf_derivative_closed_form(n, &unit), hf_derivative_closed_form(n, &at)),
            ];
            for (u, direct) in pairs {
                let scaled = scale_energy(u, omega);
                prop_assert!((scaled - direct).abs() <= 1e-12 * direct.abs());
            }
        }

        #[test]
        fn monotone_in_quanta_and_coupling(g in 0f64..30.0, dg in 1e-6f64..5.0, n in 0u32..40) {
            let a = p(1.0, g);
            let b = p(1.0, g + dg);
            for offset in ShoOffset::CANDIDATES {
                prop_assert!(sho_energy_resolved(n + 1, &a, offset) > sho_energy_resolved(n, &a, offset));
                prop_assert!(sho_energy_resolved(n, &b, offset) >= sho_energy_resolved(n, &a, offset));
                let t = QuantumTriple::new(n, n, n);
                let base = composite_energy(t, &a, offset);
                for bumped in [
                    QuantumTriple::new(n + 1, n, n),
                    QuantumTriple::new(n, n + 1, n),
                    QuantumTriple::new(n, n, n + 1),
                ] {
                    prop_assert!(composite_energy(bumped, &a, offset) > base);
                }
                prop_assert!(composite_energy(t, &b, offset) >= base);
            }
        }

        #[test]
        fn spectrum_complete_and_strictly_increasing(g in 0f64..20.0, cutoff in 0u32..12, double in any::<bool>()) {
            let sectors = if double { SectorMultiplicity::Double } else { SectorMultiplicity::Single };
            let params = p(1.0, g);
            let table = enumerate_spectrum(&params, cutoff, ShoOffset::One, sectors);
            for pair in table.levels.windows(2) {
                prop_assert!(pair[1].value - pair[0].value > LEVEL_MERGE_TOLERANCE);
            }
            let mut seen: Vec<QuantumTriple> = table.levels.iter().flat_map(|l| l.members.clone()).collect();
            seen.sort();
            let mut all = triples_up_to(cutoff);
            all.sort();
            prop_assert_eq!(seen, all);
            for level in &table.levels {
                prop_assert_eq!(level.degeneracy, level.members.len() as u32 * sectors.factor());
                for t in &level.members {
                    let e = composite_energy(*t, &params, ShoOffset::One);
                    prop_assert!((e - level.value).abs() <= 1e-12 * level.value);
                }
            }
        }
    }
}
