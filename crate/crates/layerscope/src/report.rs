//! Claim-based scenario reports: every reproduction scenario emits one
//! report listing its checks, the tolerances they were run at, and a
//! per-claim pass/fail. JSON output omits the runtime so reports are
//! byte-stable for a fixed seed.

use serde::Serialize;

#[derive(Clone, Debug, Serialize)]
pub struct Claim {
    pub description: String,
    pub expected: String,
    pub observed: String,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct NamedTolerance {
    pub name: String,
    pub value: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ScenarioReport {
    pub scenario_id: String,
    pub claims: Vec<Claim>,
    pub tolerances: Vec<NamedTolerance>,
    #[serde(skip)]
    pub runtime_ms: u64,
}

impl ScenarioReport {
    pub fn all_pass(&self) -> bool {
        !self.claims.is_empty() && self.claims.iter().all(|c| c.pass)
    }

    /// Human-readable table, one row per claim.
    pub fn render(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "scenario {} — {} claims, {} ms\n",
            self.scenario_id,
            self.claims.len(),
            self.runtime_ms
        ));
        if !self.tolerances.is_empty() {
            let tols: Vec<String> = self
                .tolerances
                .iter()
                .map(|t| format!("{}={:.1e}", t.name, t.value))
                .collect();
            out.push_str(&format!("  tolerances: {}\n", tols.join(", ")));
        }
        for claim in &self.claims {
            out.push_str(&format!(
                "  [{}] {}\n        expected {} | observed {}\n",
                if claim.pass { "PASS" } else { "FAIL" },
                claim.description,
                claim.expected,
                claim.observed
            ));
        }
        out.push_str(&format!(
            "  => {}\n",
            if self.all_pass() { "ALL PASS" } else { "FAILED" }
        ));
        out
    }
}

/// Incremental builder used by the scenarios.
pub struct ReportBuilder {
    scenario_id: String,
    claims: Vec<Claim>,
    tolerances: Vec<NamedTolerance>,
    started: std::time::Instant,
}

impl ReportBuilder {
    pub fn new(scenario_id: &str) -> Self {
        ReportBuilder {
            scenario_id: scenario_id.to_string(),
            claims: Vec::new(),
            tolerances: Vec::new(),
            started: std::time::Instant::now(),
        }
    }

    pub fn tolerance(&mut self, name: &str, value: f64) -> &mut Self {
        self.tolerances.push(NamedTolerance {
            name: name.to_string(),
            value,
        });
        self
    }

    /// Claim that a boolean check came out as expected.
    pub fn claim_bool(&mut self, description: &str, expected: bool, observed: bool) -> &mut Self {
        self.claims.push(Claim {
            description: description.to_string(),
            expected: expected.to_string(),
            observed: observed.to_string(),
            pass: expected == observed,
        });
        self
    }

    /// Claim that a value matches a target within `tol`.
    pub fn claim_close(
        &mut self,
        description: &str,
        expected: f64,
        observed: f64,
        tol: f64,
    ) -> &mut Self {
        self.claims.push(Claim {
            description: description.to_string(),
            expected: format!("{expected:.12e} ± {tol:.1e}"),
            observed: format!("{observed:.12e}"),
            pass: (expected - observed).abs() <= tol,
        });
        self
    }

    /// Claim that a residual stays within a bound.
    pub fn claim_below(&mut self, description: &str, bound: f64, observed: f64) -> &mut Self {
        self.claims.push(Claim {
            description: description.to_string(),
            expected: format!("≤ {bound:.1e}"),
            observed: format!("{observed:.3e}"),
            pass: observed <= bound,
        });
        self
    }

    /// Claim that two rendered values agree exactly.
    pub fn claim_eq(&mut self, description: &str, expected: &str, observed: &str) -> &mut Self {
        self.claims.push(Claim {
            description: description.to_string(),
            expected: expected.to_string(),
            observed: observed.to_string(),
            pass: expected == observed,
        });
        self
    }

    /// Claim that `observed` out of `expected` randomized checks passed.
    pub fn claim_count(&mut self, description: &str, expected: usize, observed: usize) -> &mut Self {
        self.claims.push(Claim {
            description: description.to_string(),
            expected: format!("{expected}/{expected}"),
            observed: format!("{observed}/{expected}"),
            pass: expected == observed,
        });
        self
    }

    pub fn finish(self) -> ScenarioReport {
        ScenarioReport {
            scenario_id: self.scenario_id,
            claims: self.claims,
            tolerances: self.tolerances,
            runtime_ms: self.started.elapsed().as_millis() as u64,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn report_requires_at_least_one_claim() {
        let builder = ReportBuilder::new("empty");
        let report = builder.finish();
        assert!(!report.all_pass());
    }

    #[test]
    fn json_omits_runtime() {
        let mut builder = ReportBuilder::new("demo");
        builder.claim_bool("it works", true, true);
        let report = builder.finish();
        let json = serde_json::to_string(&report).unwrap();
        assert!(!json.contains("runtime_ms"));
        assert!(json.contains("\"scenario_id\":\"demo\""));
        assert!(report.all_pass());
    }

    #[test]
    fn rendering_marks_failures() {
        let mut builder = ReportBuilder::new("demo");
        builder.claim_close("off by a lot", 1.0, 2.0, 1e-9);
        let report = builder.finish();
        assert!(!report.all_pass());
        assert!(report.render().contains("[FAIL]"));
    }
}
