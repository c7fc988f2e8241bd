use adiabat_core::{criteria_report, rabi_min_fidelity, RotatingFieldParams};
use serde::Serialize;

use super::{field_params, positive};
use crate::args::CriteriaArgs;
use crate::error::CliResult;
use crate::output::{write_json, TOOL};

#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
struct CriteriaRecord {
    tool_version: &'static str,
    params: RotatingFieldParams,
    omega_bar: f64,
    beta: f64,
    a_priori_value: f64,
    a_priori_generic: f64,
    a_posteriori_envelope: f64,
    verdict_a_priori: bool,
    verdict_a_posteriori: bool,
    threshold: f64,
    horizon_periods: f64,
    min_fidelity: f64,
}

pub fn run(args: &CriteriaArgs) -> CliResult<()> {
    let p = field_params(&args.field)?;
    let horizon = positive("horizon", args.horizon)?;
    let report = criteria_report(&p, args.threshold)?;
    let record = CriteriaRecord {
        tool_version: TOOL,
        params: p,
        omega_bar: report.geometry.omega_bar,
        beta: report.geometry.beta,
        a_priori_value: report.a_priori_value,
        a_priori_generic: report.a_priori_generic,
        a_posteriori_envelope: report.a_posteriori_amplitude,
        verdict_a_priori: report.verdict_a_priori,
        verdict_a_posteriori: report.verdict_a_posteriori,
        threshold: report.threshold,
        horizon_periods: horizon,
        min_fidelity: rabi_min_fidelity(&p, horizon * p.rotation_period()),
    };
    if args.common.json {
        return write_json(&record, args.common.out.as_deref());
    }
    let value = serde_json::to_value(&record).expect("record serializes");
    let mut text = String::new();
    for (key, v) in value.as_object().expect("record is an object") {
        match v {
            serde_json::Value::Object(inner) => {
                for (k, x) in inner {
                    text.push_str(&format!("{key}.{k}={x}\n"));
                }
            }
            serde_json::Value::String(s) => text.push_str(&format!("{key}={s}\n")),
            other => text.push_str(&format!("{key}={other}\n")),
        }
    }
    crate::output::write_text(&text, args.common.out.as_deref())
}
