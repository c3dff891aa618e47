use gmac_core::sweep::{sum_rate_vs_sir, SirRow};
use serde_json::json;

use crate::config::LoadedConfig;
use crate::error::CliError;
use crate::executor::PoolExecutor;
use crate::output::{channel_json, num, write_csv, write_file, write_json};
use crate::svg::{self, Chart, Series};
use crate::{Format, RunOptions};

pub fn compute(cfg: &LoadedConfig, exec: &PoolExecutor) -> Result<Vec<SirRow>, CliError> {
    let c = &cfg.config;
    if c.sir_db.is_empty() {
        return Err(cfg.error_at("sir_db", "sumrate-sir needs a non-empty list of SIR values in dB"));
    }
    let ch = cfg.channel(&c.channel)?;
    Ok(sum_rate_vs_sir(&ch, &c.sir_db, &c.sweep.resolve(), exec)?)
}

const STRATEGIES: [&str; 3] = ["gdpc", "full_cooperation", "no_cooperation"];

fn values(r: &SirRow) -> [f64; 3] {
    [r.gdpc, r.full_cooperation, r.no_cooperation]
}

pub fn write(cfg: &LoadedConfig, rows: &[SirRow], opts: &RunOptions) -> Result<Vec<std::path::PathBuf>, CliError> {
    let mut files = Vec::new();
    let dir = &opts.out;
    if opts.formats.contains(&Format::Csv) {
        let table: Vec<Vec<String>> =
            rows.iter().map(|r| std::iter::once(num(r.sir_db)).chain(values(r).map(num)).collect()).collect();
        files.push(write_csv(
            &dir.join("sumrate_sir.csv"),
            "SIR in dB (Q1 = Q2 = P/10^(SIR/10)); maximum sum rate in bits per channel use of generalized dirty-paper coding, full cooperation (case 1) and no cooperation (case 2)",
            &["sir_db", "gdpc", "full_cooperation", "no_cooperation"],
            &table,
        )?);
    }
    if opts.formats.contains(&Format::Json) {
        let ch = cfg.channel(&cfg.config.channel)?;
        let v = json!({
            "command": "sumrate-sir",
            "channel": channel_json(&ch),
            "rows": rows.iter().map(|r| json!({
                "sir_db": r.sir_db,
                "gdpc": r.gdpc,
                "full_cooperation": r.full_cooperation,
                "no_cooperation": r.no_cooperation,
            })).collect::<Vec<_>>(),
        });
        files.push(write_json(&dir.join("sumrate_sir.json"), &v)?);
    }
    if opts.formats.contains(&Format::Svg) {
        let chart = Chart {
            title: cfg.config.title.clone().unwrap_or_else(|| "Sum rate versus SIR".into()),
            x_label: "SIR [dB]".into(),
            y_label: "R1 + R2 [bits/channel use]".into(),
            series: STRATEGIES
                .iter()
                .enumerate()
                .map(|(k, name)| Series {
                    label: name.replace('_', " "),
                    points: rows.iter().map(|r| (r.sir_db, values(r)[k])).collect(),
                    markers: true,
                })
                .collect(),
            from_origin: false,
        };
        files.push(write_file(&dir.join("sumrate_sir.svg"), svg::render(&chart).as_bytes())?);
    }
    Ok(files)
}
