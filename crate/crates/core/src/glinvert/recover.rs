use super::{build_kernel, InversionOptions, SpectralDataset};
use crate::baseline::{AiryRegular, BaseSpectrum};
use crate::error::{Error, Result};
use crate::specfun::ai_negative_zeros;
use crate::sturm::{PotentialSamples, RadialGrid};

/// What ended the recovery domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DomainLimit {
    /// The reporting fraction of `r_max`, or the grid end.
    Report,
    /// A basis function passed the magnitude cap.
    Magnitude,
    /// The reduced system became too ill-conditioned.
    Conditioning,
}

impl DomainLimit {
    pub fn as_str(&self) -> &'static str {
        match self {
            DomainLimit::Report => "report",
            DomainLimit::Magnitude => "magnitude",
            DomainLimit::Conditioning => "conditioning",
        }
    }
}

/// Recovered perturbation on the leading nodes of a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct RecoveryResult {
    pub grid: RadialGrid,
    pub k_diag: Vec<f64>,
    pub p: Vec<f64>,
    pub q: Vec<f64>,
    pub cond: Vec<f64>,
    pub residual: Vec<f64>,
    pub limit: DomainLimit,
}

impl RecoveryResult {
    pub fn len(&self) -> usize {
        self.p.len()
    }

    pub fn is_empty(&self) -> bool {
        self.p.is_empty()
    }

    pub fn r(&self, i: usize) -> f64 {
        self.grid.r(i)
    }

    pub fn retained_r_max(&self) -> f64 {
        self.grid.r(self.len() - 1)
    }

    /// Something other than the reporting limit shortened the domain.
    pub fn is_truncated(&self) -> bool {
        self.limit != DomainLimit::Report
    }

    pub fn max_condition(&self) -> f64 {
        self.cond.iter().copied().fold(0.0, f64::max)
    }

    pub fn max_residual(&self) -> f64 {
        self.residual.iter().copied().fold(0.0, f64::max)
    }

    /// `sup |p|` over nodes with `r <= r_limit`.
    pub fn sup_abs_p(&self, r_limit: f64) -> f64 {
        self.p
            .iter()
            .enumerate()
            .take_while(|(i, _)| self.grid.r(*i) <= r_limit * (1.0 + 1e-12))
            .fold(0.0, |m, (_, v)| m.max(v.abs()))
    }

    /// Recovered `q` on the whole grid, continued by `q = r` past the
    /// retained interval.
    pub fn extended_potential(&self) -> PotentialSamples {
        let q = (0..self.grid.len())
            .map(|i| self.q.get(i).copied().unwrap_or_else(|| self.grid.r(i)))
            .collect();
        PotentialSamples::new(self.grid, q, true).expect("finite samples")
    }
}

/// Full degenerate-kernel recovery.
///
/// The result covers `[0, min(r_kernel, report_fraction * r_max)]`, where
/// `r_kernel` is the end of the domain allowed by the magnitude cap. The
/// domain also ends early once the condition estimate passes
/// `domain_condition`: every growing basis function adds an eigenvalue of
/// order `s² ‖Ψ‖²` to the system, so conditioning, not overflow, is what
/// limits accuracy.
pub fn recover_potential(
    data: &SpectralDataset,
    base: &BaseSpectrum,
    grid: RadialGrid,
    opts: &InversionOptions,
) -> Result<RecoveryResult> {
    let ker = build_kernel(data, base, grid, opts)?;
    let limit = if opts.report_fraction >= 1.0 {
        grid.len()
    } else {
        grid.index_at_or_below(opts.report_fraction * grid.r_max()) + 1
    };
    let len = ker.retained().min(limit);
    let mut out = RecoveryResult {
        grid,
        k_diag: Vec::with_capacity(len),
        p: Vec::with_capacity(len),
        q: Vec::with_capacity(len),
        cond: Vec::with_capacity(len),
        residual: Vec::with_capacity(len),
        limit: if ker.retained() < limit {
            DomainLimit::Magnitude
        } else {
            DomainLimit::Report
        },
    };
    for i in 0..len {
        let sol = ker.solve_at(i, opts.condition_limit)?;
        if sol.condition > opts.domain_condition && i >= 2 {
            out.limit = DomainLimit::Conditioning;
            break;
        }
        let p = 2.0 * sol.dk_diag;
        out.k_diag.push(sol.k_diag);
        out.p.push(p);
        out.q.push(grid.r(i) + p);
        out.cond.push(sol.condition);
        out.residual.push(sol.residual);
    }
    Ok(out)
}

/// Closed-form potential for one level `(E0, s0)` inserted below the base spectrum.
///
/// Uses `∫_0^x φ² = (x - E) φ² - φ'² + 1`, valid for `q0 = r`, so no
/// quadrature and no magnitude cap are involved; the result spans the grid.
pub fn single_level_potential(e0: f64, s0: f64, grid: RadialGrid) -> Result<RecoveryResult> {
    if !(s0.is_finite() && s0 >= 0.0) {
        return Err(Error::invalid(format!("slope must be nonnegative, got {s0}")));
    }
    let first = ai_negative_zeros(1)?[0].value;
    if !(e0 < first) {
        return Err(Error::invalid(format!(
            "inserted level {e0} must lie below the first base level {first}"
        )));
    }
    let form = AiryRegular::new(e0)?;
    let c = s0 * s0;
    let n = grid.len();
    let mut out = RecoveryResult {
        grid,
        k_diag: Vec::with_capacity(n),
        p: Vec::with_capacity(n),
        q: Vec::with_capacity(n),
        cond: vec![1.0; n],
        residual: vec![0.0; n],
        limit: DomainLimit::Report,
    };
    for x in grid.nodes() {
        let (phi, dphi) = form.eval(x)?;
        let int = (x - e0) * phi * phi - dphi * dphi + 1.0;
        let den = 1.0 + c * int;
        let k = -c * phi * phi / den;
        let p = -2.0 * (2.0 * c * phi * dphi / den - k * k);
        out.k_diag.push(k);
        out.p.push(p);
        out.q.push(x + p);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::baseline::base_spectrum;
    use crate::glinvert::SpectralDatum;
    use crate::sturm::bound_states;

    fn grid() -> RadialGrid {
        RadialGrid::new(20.0, 4001).unwrap()
    }

    fn one_level(e: f64, s: f64) -> SpectralDataset {
        SpectralDataset::new(vec![SpectralDatum { index: 0, energy: e, slope: s }]).unwrap()
    }

    #[test]
    fn null_recovery() {
        let g = grid();
        let b = base_spectrum(6, g).unwrap();
        let res = recover_potential(
            &SpectralDataset::from_base(&b, 6).unwrap(),
            &b,
            g,
            &InversionOptions::default(),
        )
        .unwrap();
        assert_eq!(res.len(), 3201);
        assert!(!res.is_truncated());
        assert!(res.sup_abs_p(16.0) <= 1e-8, "{}", res.sup_abs_p(16.0));
        for (i, q) in res.q.iter().enumerate() {
            assert_eq!(*q, g.r(i) + res.p[i]);
        }
    }

    #[test]
    fn closed_form_matches_general_solver() {
        let g = grid();
        let b = base_spectrum(1, g).unwrap();
        let general = recover_potential(&one_level(1.0, 1.0), &b, g, &InversionOptions::default()).unwrap();
        let closed = single_level_potential(1.0, 1.0, g).unwrap();
        assert_eq!(general.limit, DomainLimit::Magnitude);
        let diff = general
            .p
            .iter()
            .zip(&closed.p)
            .fold(0.0f64, |m, (a, c)| m.max((a - c).abs()));
        assert!(diff <= 1e-8, "sup diff {diff} up to r = {}", general.retained_r_max());
    }

    #[test]
    fn analytic_derivative_matches_differences() {
        let g = grid();
        let b = base_spectrum(1, g).unwrap();
        let res = recover_potential(&one_level(1.0, 1.0), &b, g, &InversionOptions::default()).unwrap();
        let h = g.spacing();
        for i in 1..res.len() - 1 {
            let fd = (res.k_diag[i + 1] - res.k_diag[i - 1]) / (2.0 * h);
            let an = 0.5 * res.p[i];
            assert!((fd - an).abs() <= 1e-4 * an.abs(), "x = {}", g.r(i));
        }
    }

    #[test]
    fn zero_strength_insertion_is_null() {
        let res = single_level_potential(1.0, 0.0, grid()).unwrap();
        assert!(res.p.iter().all(|p| *p == 0.0));
        // the limit is not uniform: φ grows like Bi, so check a bounded interval
        let tiny = single_level_potential(1.0, 1e-9, grid()).unwrap();
        assert!(tiny.sup_abs_p(8.0) < 1e-6, "{}", tiny.sup_abs_p(8.0));
    }

    #[test]
    fn closed_form_rejects_level_above_ground_state() {
        assert!(single_level_potential(2.5, 1.0, grid()).is_err());
        assert!(single_level_potential(1.0, -1.0, grid()).is_err());
    }

    #[test]
    fn inserted_level_appears_in_forward_spectrum() {
        let g = grid();
        let res = single_level_potential(1.0, 1.0, g).unwrap();
        assert_eq!(res.p[0], 0.0);
        let pot = PotentialSamples::new(g, res.q.clone(), false).unwrap();
        let states = bound_states(&pot, 5).unwrap();
        assert!((states[0].energy - 1.0).abs() < 1e-3, "{}", states[0].energy);
        assert!((states[0].slope - 1.0).abs() < 1e-3, "{}", states[0].slope);
        let zeros = ai_negative_zeros(4).unwrap();
        for (s, z) in states[1..].iter().zip(&zeros) {
            assert!((s.energy - z.value).abs() < 1e-3, "{} vs {}", s.energy, z.value);
            assert!((s.slope - 1.0).abs() < 1e-3);
        }
    }

    #[test]
    fn conditioning_ends_the_domain() {
        let g = grid();
        let b = base_spectrum(4, g).unwrap();
        let data = SpectralDataset::new(vec![
            SpectralDatum { index: 1, energy: 2.4, slope: 0.97 },
            SpectralDatum { index: 2, energy: 4.12, slope: 0.98 },
            SpectralDatum { index: 3, energy: 5.55, slope: 0.985 },
        ])
        .unwrap();
        let opts = InversionOptions::default();
        let res = recover_potential(&data, &b, g, &opts).unwrap();
        assert_eq!(res.limit, DomainLimit::Conditioning);
        assert!(res.max_condition() <= opts.domain_condition);
        let loose = InversionOptions { domain_condition: 1e9, ..opts };
        let longer = recover_potential(&data, &b, g, &loose).unwrap();
        assert!(longer.len() > res.len());
        assert_eq!(&longer.p[..res.len()], &res.p[..]);
    }

    #[test]
    fn extension_pads_with_linear_potential() {
        let g = grid();
        let b = base_spectrum(1, g).unwrap();
        let res = recover_potential(&one_level(1.0, 1.0), &b, g, &InversionOptions::default()).unwrap();
        let ext = res.extended_potential();
        assert_eq!(ext.values().len(), g.len());
        assert_eq!(ext.values()[res.len()], g.r(res.len()));
        assert_eq!(ext.values()[res.len() - 1], res.q[res.len() - 1]);
    }
}
