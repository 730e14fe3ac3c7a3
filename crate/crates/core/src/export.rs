//! CSV output. Every file opens with `#` comment lines describing its
//! contents; times are in 1/γ_c and rates in γ_c.

use std::io::Write;

use crate::density::{Basis, DensityMatrix};
use crate::error::Result;
use crate::integrator::{ModelSnapshot, StepMode, Trajectory};
use crate::params::SystemParams;

pub const UNITS_NOTE: &str = "units: t in 1/gamma_c, rates and frequencies in gamma_c";

fn pair_name(basis: Basis, i: usize, j: usize) -> String {
    let n = basis.level_names();
    match basis {
        Basis::Bare => format!("{}{}", n[i], n[j]),
        Basis::Dressed => format!("{}_{}", n[i], n[j]),
    }
}

const UPPER: [(usize, usize); 3] = [(0, 1), (0, 2), (1, 2)];

/// Column names for a trajectory or state row in `basis`: three coherences
/// as (re, im) pairs, then the three populations.
pub fn state_columns(basis: Basis) -> Vec<String> {
    let mut cols = Vec::with_capacity(9);
    for (i, j) in UPPER {
        let name = pair_name(basis, i, j);
        cols.push(format!("re_{name}"));
        cols.push(format!("im_{name}"));
    }
    for k in 0..3 {
        cols.push(format!("rho_{}", pair_name(basis, k, k)));
    }
    cols
}

pub fn state_values(rho: &DensityMatrix) -> Vec<f64> {
    let mut v = Vec::with_capacity(9);
    for (i, j) in UPPER {
        let z = rho.get(i, j);
        v.push(z.re);
        v.push(z.im);
    }
    v.extend(rho.populations());
    v
}

/// Writes `#`-prefixed comment lines, then hands back a CSV writer.
pub fn csv_with_comments<W: Write>(mut out: W, comments: &[String]) -> Result<csv::Writer<W>> {
    for c in comments {
        for line in c.lines() {
            writeln!(out, "# {line}")?;
        }
    }
    Ok(csv::Writer::from_writer(out))
}

fn write_row<W: Write>(w: &mut csv::Writer<W>, values: &[f64]) -> Result<()> {
    w.write_record(values.iter().map(|x| x.to_string()))?;
    Ok(())
}

pub fn describe_step_mode(mode: &StepMode) -> String {
    match mode {
        StepMode::Adaptive { atol, rtol } => {
            format!("adaptive Dormand-Prince 5(4), atol={atol:e} rtol={rtol:e}")
        }
        StepMode::Fixed { dt } => format!("fixed-step RK4, dt={dt}"),
    }
}

pub fn write_trajectory_csv<W: Write>(
    traj: &Trajectory,
    out: W,
    extra_comments: &[String],
) -> Result<()> {
    let model = match &traj.model {
        ModelSnapshot::Bare(p) => format!("params: {p}"),
        ModelSnapshot::Dressed(k) => format!(
            "rates: R={} gamma_alpha={} gamma_beta={} gamma_alpha_beta={} gamma_beta_gamma={} \
             gamma_tilde={} gamma_tilde_prime={} lambda={} lambda_prime={}",
            k.r,
            k.gamma_alpha,
            k.gamma_beta,
            k.gamma_alpha_beta,
            k.gamma_beta_gamma,
            k.gamma_tilde,
            k.gamma_tilde_prime,
            k.lambda,
            k.lambda_prime
        ),
    };
    let mut comments = vec![
        format!("trajectory, {} basis", traj.basis),
        model,
        format!("integrator: {}", describe_step_mode(&traj.control.mode)),
        UNITS_NOTE.to_string(),
    ];
    comments.extend_from_slice(extra_comments);
    let mut w = csv_with_comments(out, &comments)?;
    let mut header = vec!["t".to_string()];
    header.extend(state_columns(traj.basis));
    w.write_record(&header)?;
    for s in &traj.samples {
        let mut row = vec![s.t];
        row.extend(state_values(&s.rho));
        write_row(&mut w, &row)?;
    }
    w.flush()?;
    Ok(())
}

/// One labelled steady state in both bases.
#[derive(Debug, Clone, PartialEq)]
pub struct SteadyRow {
    pub source: String,
    pub params: SystemParams,
    pub dressed: DensityMatrix,
    pub bare: DensityMatrix,
}

pub fn write_steady_csv<W: Write>(rows: &[SteadyRow], out: W) -> Result<()> {
    let mut w = csv_with_comments(
        out,
        &[
            "steady states, dressed and bare".to_string(),
            UNITS_NOTE.to_string(),
        ],
    )?;
    let mut header: Vec<String> = [
        "source",
        "omega",
        "g_probe",
        "delta1",
        "delta2",
        "gamma_b",
        "gamma_c",
        "lambda_pump",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    header.extend(state_columns(Basis::Dressed));
    header.extend(state_columns(Basis::Bare));
    w.write_record(&header)?;
    for r in rows {
        let p = &r.params;
        let mut rec = vec![r.source.clone()];
        let mut nums = vec![
            p.omega,
            p.g_probe,
            p.delta1,
            p.delta2,
            p.gamma_b,
            p.gamma_c,
            p.lambda_pump,
        ];
        nums.extend(state_values(&r.dressed));
        nums.extend(state_values(&r.bare));
        rec.extend(nums.iter().map(|x| x.to_string()));
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bare::integrate_bare;
    use crate::integrator::StepControl;

    #[test]
    fn column_names() {
        assert_eq!(
            state_columns(Basis::Bare).join(","),
            "re_ab,im_ab,re_ac,im_ac,re_bc,im_bc,rho_aa,rho_bb,rho_cc"
        );
        assert!(state_columns(Basis::Dressed).contains(&"im_alpha_beta".to_string()));
        assert!(state_columns(Basis::Dressed).contains(&"rho_gamma_gamma".to_string()));
    }

    #[test]
    fn trajectory_csv_shape() {
        let p = SystemParams::new(0.0, 0.0, 1.0, 1.0, 0.0);
        let traj = integrate_bare(
            &DensityMatrix::pure_level(Basis::Bare, 1),
            &p,
            1.0,
            &StepControl::fixed(0.01).with_sample_interval(0.5),
        )
        .unwrap();
        let mut buf = Vec::new();
        write_trajectory_csv(&traj, &mut buf, &[]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let data: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
        assert_eq!(
            data[0],
            "t,re_ab,im_ab,re_ac,im_ac,re_bc,im_bc,rho_aa,rho_bb,rho_cc"
        );
        assert_eq!(data.len(), 4);
        assert!(data[1].starts_with("0,0,0,0,0,0,0,0,1,0"));
        assert!(text.contains("1/gamma_c"));
    }
}
