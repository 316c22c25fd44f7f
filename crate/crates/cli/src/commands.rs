//! The `bound`, `distribution` and `spectrum` reports.

use std::f64::consts::{PI, TAU};
use std::io::Write;

use phasebound_core::oracle::power_iteration;
use phasebound_core::{
    cauchy_bound, conditional_probability, interval_probability, least_upper_bound,
    nystrom_spectrum, phase_density, xi, AsymptoticProblem, ConcentrationKernel, FockState,
    NumberWindow, OracleConfig, PhaseMatrix, PhaseWindow, PowerStatus,
};
use serde::Serialize;

use crate::error::CliError;
use crate::format::{csv_writer, float};

/// Attainment must reproduce the eigenvalue to this accuracy.
pub const ATTAINMENT_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Serialize)]
pub struct Verification {
    pub power_lambda0: f64,
    pub power_iterations: usize,
    pub power_status: String,
    pub power_difference: f64,
    pub attained_probability: f64,
    pub attainment_difference: f64,
    pub max_residual: f64,
    pub orthogonality_defect: f64,
    pub top_gap: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundReport {
    pub dalpha: f64,
    pub dk: usize,
    pub xi: f64,
    pub lambda0: f64,
    pub cauchy_bound: f64,
    pub optimal_state: FockState,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verification: Option<Verification>,
}

pub fn bound(dalpha: f64, dk: usize, verify: bool) -> Result<BoundReport, CliError> {
    let optimal = least_upper_bound(dalpha, dk)?;
    let verification = if verify {
        let kernel = ConcentrationKernel::new(dalpha, dk)?;
        let (power_lambda0, power_iterations, power_status) = if dalpha == 0.0 {
            (0.0, 0, "zero_kernel".to_string())
        } else {
            let est = power_iteration(&kernel, &OracleConfig::default())?;
            let status = match est.status {
                PowerStatus::Converged => "converged",
                PowerStatus::SlowConvergence => "slow_convergence",
                PowerStatus::GapDegenerate => "gap_degenerate",
            };
            (est.lambda0, est.iterations, status.to_string())
        };
        let attained = conditional_probability(
            &optimal.state,
            &PhaseWindow::centered(dalpha)?,
            &NumberWindow::new(0, dk),
        )?;
        let attainment_difference = (attained - optimal.lambda0).abs();
        if attainment_difference > ATTAINMENT_TOL {
            return Err(CliError::Numerical(format!(
                "optimal state reaches {attained}, eigenvalue is {}",
                optimal.lambda0
            )));
        }
        let d = optimal.spectrum.diagnostics;
        Some(Verification {
            power_lambda0,
            power_iterations,
            power_status,
            power_difference: (power_lambda0 - optimal.lambda0).abs(),
            attained_probability: attained,
            attainment_difference,
            max_residual: d.max_residual,
            orthogonality_defect: d.orthogonality_defect,
            top_gap: d.top_gap,
        })
    } else {
        None
    };
    Ok(BoundReport {
        dalpha,
        dk,
        xi: xi(dalpha, dk)?,
        lambda0: optimal.lambda0,
        cauchy_bound: cauchy_bound(dalpha, dk)?,
        optimal_state: optimal.state,
        verification,
    })
}

impl BoundReport {
    pub fn write_text<W: Write>(&self, mut w: W) -> Result<(), CliError> {
        writeln!(w, "dalpha        {}", float(self.dalpha))?;
        writeln!(w, "dk            {}", self.dk)?;
        writeln!(w, "xi            {}", float(self.xi))?;
        writeln!(w, "lambda0       {}", float(self.lambda0))?;
        writeln!(w, "cauchy_bound  {}", float(self.cauchy_bound))?;
        writeln!(w, "optimal_state")?;
        for (n, a) in self.optimal_state.iter() {
            writeln!(w, "  {n:>6}  {}", float(a.re))?;
        }
        if let Some(v) = &self.verification {
            writeln!(w, "verification")?;
            writeln!(w, "  power_lambda0          {}", float(v.power_lambda0))?;
            writeln!(w, "  power_iterations       {}", v.power_iterations)?;
            writeln!(w, "  power_status           {}", v.power_status)?;
            writeln!(w, "  power_difference       {}", float(v.power_difference))?;
            writeln!(
                w,
                "  attained_probability   {}",
                float(v.attained_probability)
            )?;
            writeln!(
                w,
                "  attainment_difference  {}",
                float(v.attainment_difference)
            )?;
            writeln!(w, "  max_residual           {}", float(v.max_residual))?;
            writeln!(
                w,
                "  orthogonality_defect   {}",
                float(v.orthogonality_defect)
            )?;
            writeln!(w, "  top_gap                {}", float(v.top_gap))?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn write_json<W: Write>(&self, mut w: W) -> Result<(), CliError> {
        serde_json::to_writer_pretty(&mut w, self)?;
        w.write_all(b"\n")?;
        w.flush()?;
        Ok(())
    }
}

pub fn parse_state(text: &str) -> Result<FockState, CliError> {
    let state: FockState =
        serde_json::from_str(text).map_err(|e| CliError::Input(format!("malformed state: {e}")))?;
    Ok(state.normalize()?)
}

#[derive(Debug, Clone, Serialize)]
pub struct WindowProbability {
    pub alpha: f64,
    pub dalpha: f64,
    pub probability: f64,
}

/// Density samples at `-pi + 2 pi j / points` plus the window probability.
pub fn distribution(
    state: &FockState,
    window: &PhaseWindow,
    points: usize,
) -> Result<(Vec<(f64, f64)>, WindowProbability), CliError> {
    if points == 0 {
        return Err(CliError::Input("--points must be positive".into()));
    }
    let state = state.normalize()?;
    let samples = (0..points)
        .map(|j| {
            let phi = -PI + TAU * j as f64 / points as f64;
            Ok((phi, phase_density(&state, &PhaseMatrix::Canonical, phi)?))
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let probability = interval_probability(&state, window)?;
    Ok((
        samples,
        WindowProbability {
            alpha: window.center(),
            dalpha: window.width(),
            probability,
        },
    ))
}

pub fn write_distribution_csv<W: Write>(samples: &[(f64, f64)], sink: W) -> Result<(), CliError> {
    let mut w = csv_writer(sink);
    w.write_record(["phi", "density"])?;
    for &(phi, d) in samples {
        w.write_record([float(phi), float(d)])?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SpectrumRequest {
    Discrete { dalpha: f64, dk: usize },
    Continuum { xi: f64, nodes: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumTable {
    pub eigenvalues: Vec<f64>,
    /// Set for the continuum form.
    pub nodes: Option<usize>,
}

pub fn spectrum(request: SpectrumRequest) -> Result<SpectrumTable, CliError> {
    match request {
        SpectrumRequest::Discrete { dalpha, dk } => {
            let s = phasebound_core::eigensystem(&ConcentrationKernel::new(dalpha, dk)?)?;
            Ok(SpectrumTable {
                eigenvalues: s.eigenvalues,
                nodes: None,
            })
        }
        SpectrumRequest::Continuum { xi, nodes } => {
            let s = nystrom_spectrum(&AsymptoticProblem::new(xi, nodes)?)?;
            Ok(SpectrumTable {
                nodes: Some(s.node_count()),
                eigenvalues: s.eigenvalues,
            })
        }
    }
}

pub fn write_spectrum_csv<W: Write>(table: &SpectrumTable, sink: W) -> Result<(), CliError> {
    let mut w = csv_writer(sink);
    match table.nodes {
        None => w.write_record(["index", "eigenvalue"])?,
        Some(_) => w.write_record(["index", "eigenvalue", "nodes"])?,
    }
    for (i, &l) in table.eigenvalues.iter().enumerate() {
        match table.nodes {
            None => w.write_record([i.to_string(), float(l)])?,
            Some(n) => w.write_record([i.to_string(), float(l), n.to_string()])?,
        }
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_PI;

    #[test]
    fn bound_examples() {
        let r = bound(PI, 1, true).unwrap();
        assert!((r.lambda0 - 0.818_309_886_183_790_7).abs() < 1e-15);
        assert_eq!(r.xi, 1.0);
        let v = r.verification.unwrap();
        assert_eq!(v.power_status, "converged");
        assert!(v.power_difference < 1e-9);
        assert!(v.attainment_difference < 1e-10);

        assert_eq!(bound(TAU, 5, true).unwrap().lambda0, 1.0);
        assert!(matches!(bound(-1.0, 1, false), Err(CliError::Domain(_))));
        assert_eq!(bound(0.0, 2, true).unwrap().lambda0, 0.0);
    }

    #[test]
    fn distribution_examples() {
        let w = PhaseWindow::centered(1.0).unwrap();
        let (samples, p) = distribution(&FockState::number(0), &w, 16).unwrap();
        assert!(samples.iter().all(|&(_, d)| (d - 1.0 / TAU).abs() < 1e-15));
        assert!((p.probability - 1.0 / TAU).abs() < 1e-15);

        let pair = parse_state(r#"{"offset":0,"re":[1,1],"im":[0,0]}"#).unwrap();
        let (samples, _) = distribution(&pair, &w, 8).unwrap();
        for &(phi, d) in &samples {
            assert!((d - (1.0 + phi.cos()) / TAU).abs() < 1e-15);
        }
        assert!((samples[4].1 - FRAC_1_PI).abs() < 1e-15);

        assert!(matches!(
            parse_state(r#"{"offset":0,"re":[0,0],"im":[0,0]}"#),
            Err(CliError::Input(_))
        ));
        assert!(parse_state("{not json").is_err());
    }

    #[test]
    fn spectrum_examples() {
        let t = spectrum(SpectrumRequest::Discrete { dalpha: PI, dk: 1 }).unwrap();
        assert!((t.eigenvalues[0] - (0.5 + FRAC_1_PI)).abs() < 1e-15);
        assert!((t.eigenvalues[1] - 0.181_690_113_816_209_3).abs() < 1e-15);

        let t = spectrum(SpectrumRequest::Discrete { dalpha: TAU, dk: 2 }).unwrap();
        assert_eq!(t.eigenvalues, vec![1.0; 3]);

        let t = spectrum(SpectrumRequest::Continuum { xi: 1.0, nodes: 64 }).unwrap();
        assert_eq!(t.nodes, Some(64));
        assert!((t.eigenvalues.iter().sum::<f64>() - 1.0).abs() < 1e-10);

        let mut out = Vec::new();
        write_spectrum_csv(&t, &mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert!(text.starts_with("index,eigenvalue,nodes\n0,"));
        assert_eq!(text.lines().count(), 65);
    }
}
