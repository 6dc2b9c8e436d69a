// Copyright 2026 The fockgate Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! The four subcommands and their table / CSV / JSON renderings.

use std::sync::Arc;

use anyhow::Result;
use fockgate_core::gate::{balance_points, qubit_registry, ScanRow};
use fockgate_core::{
    reflectivity_scan, BasisInput, Complex64, ErrorBudget, GateConfig, GateReport, PhaseGateLab,
    PostSelectionRule, PureState, QubitEncoding,
};
use serde_json::{json, Map, Value};

use crate::config::{Format, InputSpec, ScenarioConfig};
use crate::render::{annotated, annotated_complex, json_complex, json_real, number};
use crate::verify::{run_checks, CheckResult};

/// Rendered report plus whether the command considers itself successful.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub body: String,
    pub success: bool,
}

fn ok(body: String) -> Result<Report> {
    Ok(Report { body, success: true })
}

fn lab(config: &ScenarioConfig) -> Result<PhaseGateLab> {
    Ok(PhaseGateLab::new(GateConfig::uniform(config.reflectivity))?)
}

fn envelope(command: &str, config: &ScenarioConfig, data: Value) -> String {
    let mut cfg = Map::new();
    cfg.insert("encoding".into(), json!(config.encoding.name()));
    cfg.insert("reflectivity".into(), json_real(config.reflectivity));
    cfg.insert("rule".into(), json!(config.rule_name()));
    cfg.insert("format".into(), json!(config.format.name()));
    if command == "scan" {
        cfg.insert("grid".into(), json!(config.grid_spec));
    }
    if let Some(label) = &config.input_label {
        cfg.insert("input".into(), json!(label));
    }
    if let Some(out) = &config.out {
        cfg.insert("out".into(), json!(out.display().to_string()));
    }
    let doc = json!({
        "meta": {
            "version": env!("CARGO_PKG_VERSION"),
            "command": command,
            "seed": config.seed,
            "config": Value::Object(cfg),
        },
        "data": data,
    });
    let mut s = serde_json::to_string_pretty(&doc).expect("JSON values serialize");
    s.push('\n');
    s
}

fn csv_document(header: &[&str], rows: Vec<Vec<String>>) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for row in rows {
        w.write_record(row)?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

/// Left-aligned columns separated by two spaces.
fn text_table(header: &[String], rows: &[Vec<String>]) -> String {
    let cols = header.len();
    let width: Vec<usize> = (0..cols)
        .map(|c| {
            rows.iter()
                .map(|r| r[c].chars().count())
                .chain([header[c].chars().count()])
                .max()
                .unwrap_or(0)
        })
        .collect();
    let line = |cells: &[String]| {
        let padded: Vec<String> = cells
            .iter()
            .zip(&width)
            .map(|(c, w)| format!("{c:<w$}", w = *w))
            .collect();
        format!("{}\n", padded.join("  ").trim_end())
    };
    let mut out = line(header);
    for r in rows {
        out.push_str(&line(r));
    }
    out
}

fn ideal_name(encoding: QubitEncoding) -> &'static str {
    match encoding {
        QubitEncoding::PhaseGate => "CZ",
        QubitEncoding::Cnot => "CNOT",
    }
}

fn budget_json(label: &str, b: &ErrorBudget) -> Value {
    json!({
        "input": label,
        "success": json_real(b.success),
        "loss": json_real(b.loss),
        "bunching": json_real(b.bunching),
        "total": json_real(b.total()),
    })
}

pub fn truth_table(config: &ScenarioConfig) -> Result<Report> {
    let lab = lab(config)?;
    let rule = PostSelectionRule::of_kind(config.rule);
    let report = lab.truth_table_with_rule(config.encoding, &rule)?;
    let labels = QubitEncoding::LABELS;
    match config.format {
        Format::Json => ok(envelope("truth-table", config, truth_table_json(&report))),
        Format::Csv => {
            let mut rows = Vec::new();
            for (j, input) in labels.iter().enumerate() {
                for (i, output) in labels.iter().enumerate() {
                    let a = report.truth_table[i][j];
                    let c = report.conditional_table[i][j];
                    rows.push(vec![
                        input.to_string(),
                        output.to_string(),
                        number(a.re),
                        number(a.im),
                        number(c.re),
                        number(c.im),
                        number(report.success_probabilities[j]),
                    ]);
                }
            }
            ok(csv_document(
                &[
                    "input",
                    "output",
                    "amplitude_re",
                    "amplitude_im",
                    "conditional_re",
                    "conditional_im",
                    "success_probability",
                ],
                rows,
            )?)
        }
        Format::Table => {
            let mut out = format!(
                "truth table: encoding {}, R = {}, rule {}\n\n",
                config.encoding.name(),
                annotated(config.reflectivity),
                config.rule_name()
            );
            let mut header = vec!["out \\ in".to_string()];
            header.extend(labels.iter().map(|l| l.to_string()));
            let mut rows: Vec<Vec<String>> = (0..4)
                .map(|i| {
                    let mut row = vec![labels[i].to_string()];
                    row.extend((0..4).map(|j| annotated_complex(report.truth_table[i][j])));
                    row
                })
                .collect();
            let mut p = vec!["success".to_string()];
            p.extend(report.success_probabilities.iter().map(|&x| annotated(x)));
            rows.push(p);
            out.push_str(&text_table(&header, &rows));
            out.push_str(&format!(
                "\nfidelity vs {}: {}\n",
                ideal_name(config.encoding),
                annotated(report.fidelity)
            ));
            ok(out)
        }
    }
}

fn truth_table_json(report: &GateReport) -> Value {
    let table = |t: &[[Complex64; 4]; 4]| -> Value {
        t.iter()
            .map(|row| row.iter().map(|&z| json_complex(z)).collect::<Vec<_>>())
            .collect()
    };
    json!({
        "basis": QubitEncoding::LABELS,
        "layout": "truth_table[output][input]",
        "truth_table": table(&report.truth_table),
        "conditional_table": table(&report.conditional_table),
        "success_probabilities": report.success_probabilities.iter().map(|&p| json_real(p)).collect::<Vec<_>>(),
        "error_budgets": report.error_budgets.iter().zip(QubitEncoding::LABELS)
            .map(|(b, l)| budget_json(l, b)).collect::<Vec<_>>(),
        "ideal": ideal_name(report.encoding),
        "fidelity": json_real(report.fidelity),
    })
}

fn custom_input(config: &ScenarioConfig) -> Result<Option<(String, PureState)>> {
    let q = Arc::new(qubit_registry());
    let label = config.input_label.clone().unwrap_or_default();
    Ok(match &config.input {
        None => None,
        Some(InputSpec::Basis(k)) => Some((label, config.encoding.encode(q, *k)?)),
        Some(InputSpec::Amplitudes(a)) => Some((label, config.encoding.encode_amplitudes(q, a)?)),
    })
}

pub fn error_budget(config: &ScenarioConfig) -> Result<Report> {
    let lab = lab(config)?;
    let rule = PostSelectionRule::of_kind(config.rule);
    let q = Arc::new(qubit_registry());
    let mut rows: Vec<(String, ErrorBudget)> = Vec::new();
    for b in BasisInput::ALL {
        let raw = lab.run_gate(&b.state(q.clone())?)?;
        rows.push((b.label().to_string(), lab.budget_with_rule(&raw, &rule)?));
    }
    if let Some((label, state)) = custom_input(config)? {
        let raw = lab.run_gate(&state)?;
        rows.push((label, lab.budget_with_rule(&raw, &rule)?));
    }
    match config.format {
        Format::Json => {
            let data = json!({
                "rows": rows.iter().map(|(l, b)| budget_json(l, b)).collect::<Vec<_>>(),
            });
            ok(envelope("error-budget", config, data))
        }
        Format::Csv => ok(csv_document(
            &["input", "success", "loss", "bunching", "total"],
            rows.iter()
                .map(|(l, b)| {
                    vec![l.clone(), number(b.success), number(b.loss), number(b.bunching), number(b.total())]
                })
                .collect(),
        )?),
        Format::Table => {
            let header: Vec<String> = ["input", "success", "loss", "bunching", "total"]
                .map(String::from)
                .to_vec();
            let body: Vec<Vec<String>> = rows
                .iter()
                .map(|(l, b)| {
                    vec![l.clone(), annotated(b.success), annotated(b.loss), annotated(b.bunching), annotated(b.total())]
                })
                .collect();
            ok(format!(
                "error budget: R = {}, rule {}\n\n{}",
                annotated(config.reflectivity),
                config.rule_name(),
                text_table(&header, &body)
            ))
        }
    }
}

fn scan_cells(row: &ScanRow) -> Vec<Complex64> {
    vec![row.vacuum, row.upper, row.lower, row.pair]
}

pub fn scan(config: &ScenarioConfig) -> Result<Report> {
    let rows = reflectivity_scan(&config.grid)?;
    let balance = balance_points(&rows);
    match config.format {
        Format::Json => {
            let data = json!({
                "rows": rows.iter().map(|r| json!({
                    "reflectivity": json_real(r.reflectivity),
                    "vacuum": json_complex(r.vacuum),
                    "upper": json_complex(r.upper),
                    "lower": json_complex(r.lower),
                    "pair": json_complex(r.pair),
                    "imbalance": json_real(r.imbalance),
                })).collect::<Vec<_>>(),
                "balance_points": balance.iter().map(|&b| json_real(b)).collect::<Vec<_>>(),
            });
            ok(envelope("scan", config, data))
        }
        Format::Csv => ok(csv_document(
            &[
                "reflectivity", "vacuum_re", "vacuum_im", "upper_re", "upper_im", "lower_re",
                "lower_im", "pair_re", "pair_im", "imbalance",
            ],
            rows.iter()
                .map(|r| {
                    let mut cells = vec![number(r.reflectivity)];
                    for z in scan_cells(r) {
                        cells.push(number(z.re));
                        cells.push(number(z.im));
                    }
                    cells.push(number(r.imbalance));
                    cells
                })
                .collect(),
        )?),
        Format::Table => {
            let header: Vec<String> = ["R", "<0;0|U|0;0>", "<0;1|U|0;1>", "<1;0|U|1;0>", "<1;1|U|1;1>", "imbalance"]
                .map(String::from)
                .to_vec();
            let body: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    let mut cells = vec![annotated(r.reflectivity)];
                    cells.extend(scan_cells(r).into_iter().map(annotated_complex));
                    cells.push(annotated(r.imbalance));
                    cells
                })
                .collect();
            let points: Vec<String> = balance.iter().map(|&b| annotated(b)).collect();
            ok(format!(
                "{}\nbalance points in [0, 1/2): {}\n",
                text_table(&header, &body),
                if points.is_empty() { "none".to_string() } else { points.join(", ") }
            ))
        }
    }
}

pub fn verify(config: &ScenarioConfig) -> Result<Report> {
    let results = run_checks(config)?;
    let success = results.iter().all(|r| r.passed);
    let body = match config.format {
        Format::Json => envelope(
            "verify",
            config,
            json!({
                "passed": success,
                "checks": results.iter().map(|r| json!({
                    "name": r.name, "passed": r.passed, "detail": r.detail,
                })).collect::<Vec<_>>(),
            }),
        ),
        Format::Csv => csv_document(
            &["check", "passed", "detail"],
            results
                .iter()
                .map(|r| vec![r.name.to_string(), r.passed.to_string(), r.detail.clone()])
                .collect(),
        )?,
        Format::Table => verify_table(config, &results),
    };
    Ok(Report { body, success })
}

fn verify_table(config: &ScenarioConfig, results: &[CheckResult]) -> String {
    let mut out = format!(
        "verify: R = {}, seed {}\n\n",
        annotated(config.reflectivity),
        config.seed
    );
    for r in results {
        out.push_str(&format!(
            "{}  {:<34}{}\n",
            if r.passed { "PASS" } else { "FAIL" },
            r.name,
            r.detail
        ));
    }
    let failed = results.iter().filter(|r| !r.passed).count();
    out.push_str(&format!("\n{} passed, {failed} failed\n", results.len() - failed));
    out
}

