//! CSV and JSON renderings of scan results and reports.
//!
//! Curves: a `# species,N,x` header, one comment line with the values, then
//! `ct_mm,R,flag` rows. Heatmaps: `# species,N` and long-format
//! `ct_mm,x,R,flag` rows, `x` outer. `R` is empty wherever `flag` is not
//! `ok`. Floats use the shortest representation that round-trips.

use std::fmt::Write;

use serde::Serialize;

use super::{ScanResult, StaticReport};
use crate::oracle::VerificationSummary;

fn cell(v: Option<f64>) -> String {
    v.map(|r| r.to_string()).unwrap_or_default()
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("plain data serializes");
    s.push('\n');
    s
}

impl ScanResult {
    /// A single-`x` scan written as a curve.
    pub fn is_curve(&self) -> bool {
        self.x_grid.len() == 1
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        if self.is_curve() {
            let _ = writeln!(out, "# species,N,x");
            let _ = writeln!(out, "# {},{},{}", self.species, self.n, self.x_grid[0]);
            let _ = writeln!(out, "ct_mm,R,flag");
            for (i, t) in self.t_grid.iter().enumerate() {
                let _ = writeln!(
                    out,
                    "{},{},{}",
                    t,
                    cell(self.values[0][i]),
                    self.flags[0][i].as_str()
                );
            }
        } else {
            let _ = writeln!(out, "# species,N");
            let _ = writeln!(out, "# {},{}", self.species, self.n);
            let _ = writeln!(out, "ct_mm,x,R,flag");
            for (j, x) in self.x_grid.iter().enumerate() {
                for (i, t) in self.t_grid.iter().enumerate() {
                    let _ = writeln!(
                        out,
                        "{},{},{},{}",
                        t,
                        x,
                        cell(self.values[j][i]),
                        self.flags[j][i].as_str()
                    );
                }
            }
        }
        out
    }

    pub fn to_json(&self) -> String {
        json(self)
    }
}

impl StaticReport {
    /// Header comments with the species data, then one row per inequality.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# species,param,x,eps_re,eps_im,threshold");
        let (re, im) = self
            .epsilon
            .map_or((None, None), |(r, i)| (Some(r), Some(i)));
        let _ = writeln!(
            out,
            "# {},{},{},{},{},{}",
            self.species,
            self.param,
            self.x,
            cell(re),
            cell(im),
            cell(self.threshold)
        );
        let _ = writeln!(out, "inequality,lhs,rhs,ratio,satisfied");
        for f in &self.epsilon_forms {
            let ratio = (f.lhs != 0.0).then(|| f.rhs / f.lhs);
            let _ = writeln!(
                out,
                "\"{}\",{},{},{},{}",
                f.statement,
                f.lhs,
                f.rhs,
                cell(ratio),
                f.satisfied
            );
        }
        for c in &self.checks {
            let _ = writeln!(
                out,
                "\"N={}: w({}, {}) <= w({}, {}) + w({}, {})\",{},{},{},{}",
                c.n,
                c.a_plus,
                c.b_plus,
                c.c_plus,
                c.b_plus,
                c.a_plus,
                c.c_plus,
                c.lhs,
                c.rhs,
                cell(c.ratio),
                c.satisfied
            );
        }
        out
    }

    pub fn to_json(&self) -> String {
        json(self)
    }
}

impl VerificationSummary {
    /// `key,value` rows.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("key,value\n");
        let rows: [(&str, String); 9] = [
            ("models", self.models.to_string()),
            ("seed", self.seed.to_string()),
            ("tolerance", self.tolerance.to_string()),
            ("max_excess", self.max_excess.to_string()),
            ("violations", self.violations.to_string()),
            ("max_nsc_residual", self.max_nsc_residual.to_string()),
            ("max_ensc_residual", self.max_ensc_residual.to_string()),
            ("max_nsit_residual", self.max_nsit_residual.to_string()),
            ("passed", self.passed.to_string()),
        ];
        for (k, v) in rows {
            let _ = writeln!(out, "{k},{v}");
        }
        out
    }

    pub fn to_json(&self) -> String {
        json(self)
    }
}
