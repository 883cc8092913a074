//! The estimation protocol: paired sampling plus median-of-means.

use rayon::prelude::*;

use crate::eqcore::Scheme;
use crate::qsim::{NoiseModel, PauliDist, QuantumState};
use crate::rng::stream_rng;

use super::bounds::{copy_bound, variance_bound};
use super::estimator::{combine, estimator_single_unchecked};
use super::observable::Observable;
use super::sample::{apply_prep_noise, sample_espovm_outcome, sample_espovm_outcome_noisy};
use super::ShadowError;

/// Protocol configuration: N total input-state copies split into K groups of
/// N/K copies each; every trial consumes two copies (one equatorial
/// measurement plus one computational-basis measurement).
#[derive(Clone, Debug, PartialEq)]
pub struct EstimationConfig {
    pub scheme: Scheme,
    /// Total input-state copies N = N' K with N' even.
    pub total_copies: u64,
    /// Number of median-of-means groups K.
    pub groups: u64,
    pub seed: u64,
    /// Accuracy target quoted in the copy-bound report.
    pub epsilon: f64,
    /// Failure probability quoted in the copy-bound report.
    pub delta: f64,
}

impl EstimationConfig {
    pub fn new(scheme: Scheme, total_copies: u64, groups: u64, seed: u64) -> Self {
        Self {
            scheme,
            total_copies,
            groups,
            seed,
            epsilon: 0.1,
            delta: 0.05,
        }
    }

    pub fn pairs_per_group(&self) -> Result<u64, ShadowError> {
        if self.groups == 0 || self.total_copies % self.groups != 0 {
            return Err(ShadowError::InvalidConfig(format!(
                "N = {} not divisible into K = {} groups",
                self.total_copies, self.groups
            )));
        }
        let per_group = self.total_copies / self.groups;
        if per_group == 0 || per_group % 2 != 0 {
            return Err(ShadowError::InvalidConfig(format!(
                "per-group copy count {per_group} must be even and positive"
            )));
        }
        Ok(per_group / 2)
    }
}

/// What each fresh copy of the input looks like: the ideal state plus
/// optional i.i.d. preparation noise and optional measurement-circuit noise.
#[derive(Copy, Clone)]
pub struct ProtocolInput<'a> {
    pub state: &'a QuantumState,
    pub prep_noise: Option<&'a [PauliDist]>,
    pub gate_noise: Option<&'a NoiseModel>,
}

impl<'a> ProtocolInput<'a> {
    pub fn clean(state: &'a QuantumState) -> Self {
        Self {
            state,
            prep_noise: None,
            gate_noise: None,
        }
    }
}

/// Per-observable estimation report.
#[derive(Clone, Debug, PartialEq)]
pub struct EstimateReport {
    /// Median of the group means (lower median for even group counts).
    pub estimate: f64,
    pub group_means: Vec<f64>,
    /// Unbiased sample variance of the per-pair estimator values.
    pub empirical_variance: f64,
    /// Theoretical per-pair variance bound.
    pub variance_bound: f64,
    /// Informative sampling-copy bound at the configured (epsilon, delta).
    pub copy_bound: u64,
    /// Copies consumed (two per trial).
    pub copies: u64,
}

/// One recorded trial of the protocol.
#[derive(Clone, Debug)]
pub struct ShadowSample {
    pub scheme: Scheme,
    /// Post-update label (measurement outcome already folded in).
    pub label: crate::eqcore::EquatorialLabel,
    pub p_prime: crate::eqcore::BitString,
    /// Per-observable single-pair estimates.
    pub estimates: Vec<f64>,
}

/// Collect one trial: an equatorial draw on a fresh copy plus a
/// computational-basis draw on another fresh copy.
pub fn collect_shadow_sample<R: rand::Rng + ?Sized>(
    input: &ProtocolInput,
    scheme: Scheme,
    observables: &[Observable],
    rng: &mut R,
) -> Result<ShadowSample, ShadowError> {
    let (label, _p, p_prime, estimates) = run_pair(input, scheme, observables, rng)?;
    Ok(ShadowSample {
        scheme,
        label,
        p_prime,
        estimates,
    })
}

type PairOutcome = (
    crate::eqcore::EquatorialLabel,
    crate::eqcore::BitString,
    crate::eqcore::BitString,
    Vec<f64>,
);

fn run_pair<R: rand::Rng + ?Sized>(
    input: &ProtocolInput,
    scheme: Scheme,
    observables: &[Observable],
    rng: &mut R,
) -> Result<PairOutcome, ShadowError> {
    let n = input.state.n();
    // first copy: equatorial measurement
    let (label, p) = {
        let mut copy = input.state.clone();
        if let Some(prep) = input.prep_noise {
            apply_prep_noise(&mut copy, prep, rng)?;
        }
        match input.gate_noise {
            Some(noise) => sample_espovm_outcome_noisy(&copy, scheme, noise, rng)?,
            None => sample_espovm_outcome(&copy, scheme, rng)?,
        }
    };
    // second copy: computational-basis measurement, skipped when every
    // observable folds it in analytically (graph targets)
    let all_graph = observables
        .iter()
        .all(|o| matches!(o, Observable::Graph { .. }));
    let p_prime = if all_graph {
        crate::eqcore::BitString::zeros(n)
    } else {
        let mut copy = input.state.clone();
        if let Some(prep) = input.prep_noise {
            apply_prep_noise(&mut copy, prep, rng)?;
        }
        copy.measure_z_all(rng)
    };
    let mut estimates = Vec::with_capacity(observables.len());
    for obs in observables {
        let v = if let Observable::Graph { n, .. } = obs {
            let quad = obs.expval_equatorial(&label)?;
            combine(scheme, *n, quad, 0.5f64.powi(*n as i32), 1.0)
        } else {
            estimator_single_unchecked(&label, &p_prime, obs)?
        };
        estimates.push(v);
    }
    Ok((label, p, p_prime, estimates))
}

/// Run the full protocol: K groups of N'/2 sample pairs, group means, median
/// of means. Deterministic in (seed, config) regardless of worker count:
/// every pair owns the stream `(seed, group, pair)` and aggregation is
/// index-ordered.
pub fn run_protocol(
    config: &EstimationConfig,
    input: &ProtocolInput,
    observables: &[Observable],
) -> Result<Vec<EstimateReport>, ShadowError> {
    let pairs_per_group = config.pairs_per_group()?;
    if observables.is_empty() {
        return Err(ShadowError::InvalidConfig("no observables".into()));
    }
    for obs in observables {
        if obs.n() != input.state.n() {
            return Err(ShadowError::DimensionMismatch {
                expected: input.state.n(),
                got: obs.n(),
            });
        }
        if config.scheme == Scheme::Req && !obs.is_real() {
            return Err(ShadowError::ObservableNotReal);
        }
    }
    let total_pairs = (config.groups * pairs_per_group) as usize;
    let values: Vec<Vec<f64>> = (0..total_pairs)
        .into_par_iter()
        .map(|idx| {
            let g = idx as u64 / pairs_per_group;
            let k = idx as u64 % pairs_per_group;
            let mut rng = stream_rng(config.seed, g, k);
            run_pair(input, config.scheme, observables, &mut rng).map(|(_, _, _, est)| est)
        })
        .collect::<Result<_, _>>()?;

    let m = observables.len();
    let mut reports = Vec::with_capacity(m);
    for (oi, obs) in observables.iter().enumerate() {
        let series: Vec<f64> = values.iter().map(|v| v[oi]).collect();
        let mut group_means = Vec::with_capacity(config.groups as usize);
        for g in 0..config.groups as usize {
            let lo = g * pairs_per_group as usize;
            let hi = lo + pairs_per_group as usize;
            let mean = series[lo..hi].iter().sum::<f64>() / pairs_per_group as f64;
            group_means.push(mean);
        }
        let estimate = lower_median(&group_means);
        let count = series.len();
        let mean_all = series.iter().sum::<f64>() / count as f64;
        let empirical_variance = if count > 1 {
            series.iter().map(|v| (v - mean_all).powi(2)).sum::<f64>() / (count as f64 - 1.0)
        } else {
            0.0
        };
        reports.push(EstimateReport {
            estimate,
            group_means,
            empirical_variance,
            variance_bound: variance_bound(config.scheme, obs),
            copy_bound: copy_bound(config.scheme, obs, config.epsilon, config.delta, m)?,
            copies: config.total_copies,
        });
    }
    Ok(reports)
}

/// Lower median: element at index (k-1)/2 of the sorted list.
pub fn lower_median(values: &[f64]) -> f64 {
    assert!(!values.is_empty());
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    sorted[(sorted.len() - 1) / 2]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qsim::{DenseState, SparseState};

    #[test]
    fn median_rules() {
        assert_eq!(lower_median(&[1.0, 2.0, 100.0]), 2.0);
        assert_eq!(lower_median(&[4.0, 1.0]), 1.0);
        assert_eq!(lower_median(&[7.0]), 7.0);
    }

    #[test]
    fn config_validation() {
        let mut c = EstimationConfig::new(Scheme::Eq, 100, 5, 1);
        assert_eq!(c.pairs_per_group().unwrap(), 10);
        c.total_copies = 101;
        assert!(c.pairs_per_group().is_err());
        c.total_copies = 50;
        c.groups = 5; // per-group 10, even: fine
        assert_eq!(c.pairs_per_group().unwrap(), 5);
        c.groups = 4; // 50/4 not integral
        assert!(c.pairs_per_group().is_err());
    }

    #[test]
    fn k_equals_one_is_plain_mean() {
        let state = QuantumState::Sparse(SparseState::ghz(3));
        let obs = vec![Observable::ghz(3)];
        let config = EstimationConfig::new(Scheme::Req, 200, 1, 7);
        let reports = run_protocol(&config, &ProtocolInput::clean(&state), &obs).unwrap();
        assert_eq!(reports[0].group_means.len(), 1);
        assert_eq!(reports[0].estimate, reports[0].group_means[0]);
        // pure GHZ input against its own projector: estimate near 1
        assert!((reports[0].estimate - 1.0).abs() < 0.5);
    }

    #[test]
    fn deterministic_across_worker_counts() {
        let state = QuantumState::Dense(DenseState::zero_state(3));
        let obs = vec![Observable::ghz(3), Observable::w_state(3)];
        let config = EstimationConfig::new(Scheme::Req, 400, 4, 99);
        let input = ProtocolInput::clean(&state);
        let mut results = Vec::new();
        for workers in [1usize, 4, 16] {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(workers)
                .build()
                .unwrap();
            let r = pool.install(|| run_protocol(&config, &input, &obs).unwrap());
            results.push(r);
        }
        assert_eq!(results[0], results[1]);
        assert_eq!(results[1], results[2]);
    }

    #[test]
    fn unbiased_on_ghz_fidelity() {
        // mean over many pairs approaches tr(rho O) = 1 for a pure GHZ input
        let state = QuantumState::Sparse(SparseState::ghz(6));
        let obs = vec![Observable::ghz(6)];
        let config = EstimationConfig::new(Scheme::Req, 40_000, 10, 3);
        let reports = run_protocol(&config, &ProtocolInput::clean(&state), &obs).unwrap();
        let r = &reports[0];
        let se = (r.empirical_variance / (r.copies as f64 / 2.0)).sqrt();
        assert!(
            (r.estimate - 1.0).abs() < 5.0 * se + 0.02,
            "estimate {} se {se}",
            r.estimate
        );
        assert!(r.variance_bound <= 14.0);
        assert!(r.copy_bound > 0);
    }
}
