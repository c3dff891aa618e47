use gmac_core::discrete::family_union;
use gmac_core::gaussian::GaussianChannel;
use gmac_core::geometry::{RatePair, RateRegion2D};
use gmac_core::sweep::{four_case_hull, trace_boundary, CooperationCase, SweepPoint, Winner};
use serde_json::{json, Value};

use crate::config::{LoadedConfig, ModelTag, Overlay, Panel};
use crate::error::CliError;
use crate::executor::PoolExecutor;
use crate::output::{channel_json, num, write_csv, write_file, write_json};
use crate::pmf;
use crate::svg::{self, Chart, Series};
use crate::{Format, RunOptions};

/// One drawn curve.
#[derive(Debug, Clone)]
pub struct Curve {
    pub label: String,
    /// Model tag, or `data` for fixed points.
    pub model: String,
    pub region: RateRegion2D,
    /// Per-weight optimizers (swept Gaussian curves only).
    pub winners: Vec<Winner>,
    pub samples: usize,
}

#[derive(Debug, Clone)]
pub struct PanelResult {
    pub name: String,
    pub title: String,
    /// Channel of the panel before per-overlay overrides (Gaussian models).
    pub channel: Option<GaussianChannel>,
    pub curves: Vec<Curve>,
    /// Largest distance of the unrestricted doubly dirty region outside the
    /// four-case hull, when that decomposition was computed.
    pub four_case_excess: Option<f64>,
}

fn is_gaussian(m: ModelTag) -> bool {
    m != ModelTag::Discrete
}

fn run_overlay(
    cfg: &LoadedConfig,
    panel: &Panel,
    overlay: &Overlay,
    index: usize,
    exec: &PoolExecutor,
    out: &mut PanelResult,
) -> Result<(), CliError> {
    let c = &cfg.config;
    if let Some(points) = &overlay.points {
        let region = RateRegion2D::from_points(points.iter().map(|p| RatePair { r1: p[0], r2: p[1] }));
        out.curves.push(Curve {
            label: overlay.label.clone().unwrap_or_else(|| format!("data-{index}")),
            model: "data".into(),
            region,
            winners: Vec::new(),
            samples: 0,
        });
        return Ok(());
    }
    let model = overlay.model.unwrap_or(c.model);
    let spec = c.sweep.overlay(&overlay.sweep).resolve();
    let label = |default: &str| overlay.label.clone().unwrap_or_else(|| default.to_string());
    if !is_gaussian(model) {
        let d = c
            .discrete
            .as_ref()
            .ok_or_else(|| cfg.error_at("model", "model \"discrete\" needs a \"discrete\" section"))?;
        let mut all = Vec::new();
        for (i, src) in d.pmfs.iter().enumerate() {
            let fam = pmf::load(src, i, spec.seed).map_err(|e| cfg.error_at("pmfs", e))?;
            let region = family_union(fam.pmfs.iter(), d.message2_empty || fam.message2_empty)?;
            all.push(region.clone());
            out.curves.push(Curve {
                label: label(&fam.label),
                model: model.tag().into(),
                region,
                winners: Vec::new(),
                samples: fam.pmfs.len(),
            });
        }
        if all.len() > 1 {
            let region =
                gmac_core::geometry::convex_union(all.iter()).map_err(gmac_core::gaussian::ModelError::from)?;
            out.curves.push(Curve {
                label: "union".into(),
                model: model.tag().into(),
                region,
                winners: Vec::new(),
                samples: 0,
            });
        }
        return Ok(());
    }
    let ch = cfg.channel(&c.channel.overlay(&panel.channel).overlay(&overlay.channel))?;
    if model == ModelTag::FourCase {
        let rep = four_case_hull(&ch, &spec, exec)?;
        for (case, region) in CooperationCase::ALL.iter().zip(rep.cases) {
            let tag = format!("case{}", 1 + CooperationCase::ALL.iter().position(|x| x == case).unwrap());
            out.curves.push(Curve { label: case.tag().into(), model: tag, region, winners: Vec::new(), samples: 0 });
        }
        out.curves.push(Curve {
            label: "four-case-hull".into(),
            model: model.tag().into(),
            region: rep.hull,
            winners: Vec::new(),
            samples: 0,
        });
        out.curves.push(Curve {
            label: "prop2".into(),
            model: ModelTag::Prop2.tag().into(),
            region: rep.unrestricted,
            winners: Vec::new(),
            samples: 0,
        });
        out.four_case_excess = Some(rep.excess);
        return Ok(());
    }
    let m = model.sweep_model().expect("gaussian model");
    let res =
        trace_boundary(&ch, &spec, m, exec).map_err(|e| CliError::model(format!("{} ({})", model, out.name), e))?;
    out.curves.push(Curve {
        label: label(model.tag()),
        model: model.tag().into(),
        region: res.region,
        winners: res.winners,
        samples: res.samples,
    });
    Ok(())
}

pub fn compute(cfg: &LoadedConfig, exec: &PoolExecutor) -> Result<Vec<PanelResult>, CliError> {
    let c = &cfg.config;
    let overlays = cfg.overlays();
    let gaussian_base = overlays.iter().any(|o| o.points.is_none() && is_gaussian(o.model.unwrap_or(c.model)));
    let mut panels = Vec::new();
    for panel in cfg.panels() {
        let channel = if gaussian_base { Some(cfg.channel(&c.channel.overlay(&panel.channel))?) } else { None };
        let title = panel.title.clone().or_else(|| c.title.clone()).unwrap_or_else(|| panel.name.clone());
        let mut res =
            PanelResult { name: panel.name.clone(), title, channel, curves: Vec::new(), four_case_excess: None };
        for (i, o) in overlays.iter().enumerate() {
            run_overlay(cfg, &panel, o, i, exec, &mut res)?;
        }
        panels.push(res);
    }
    Ok(panels)
}

fn curve_json(c: &Curve) -> Value {
    let winners: Vec<Value> = c
        .winners
        .iter()
        .map(|w| {
            let params: serde_json::Map<String, Value> =
                SweepPoint::FIELDS.iter().zip(w.point.key()).map(|(k, v)| (k.to_string(), json!(v))).collect();
            json!({ "mu": w.mu, "value": w.value, "r1": w.rate.r1, "r2": w.rate.r2, "params": params })
        })
        .collect();
    json!({
        "label": c.label,
        "model": c.model,
        "vertices": c.region.vertices().iter().map(|v| [v.r1, v.r2]).collect::<Vec<_>>(),
        "max_r1": c.region.max_r1(),
        "max_r2": c.region.max_r2(),
        "max_sum_rate": c.region.max_sum_rate(),
        "samples": c.samples,
        "winners": winners,
    })
}

pub fn write(
    cfg: &LoadedConfig,
    panels: &[PanelResult],
    opts: &RunOptions,
) -> Result<Vec<std::path::PathBuf>, CliError> {
    let mut files = Vec::new();
    let dir = &opts.out;
    if opts.formats.contains(&Format::Csv) {
        let mut rows = Vec::new();
        let mut wrows = Vec::new();
        for p in panels {
            for c in &p.curves {
                for (i, v) in c.region.vertices().iter().enumerate() {
                    rows.push(vec![
                        p.name.clone(),
                        c.label.clone(),
                        c.model.clone(),
                        i.to_string(),
                        num(v.r1),
                        num(v.r2),
                    ]);
                }
                for w in &c.winners {
                    let mut r = vec![p.name.clone(), c.label.clone(), num(w.mu)];
                    r.extend(w.point.key().iter().map(|x| num(*x)));
                    r.extend([num(w.value), num(w.rate.r1), num(w.rate.r2)]);
                    wrows.push(r);
                }
            }
        }
        files.push(write_csv(
            &dir.join("region.csv"),
            "panel, curve label, model, vertex index, r1 and r2 in bits per channel use; Pareto vertices of the convex hull, axis intercepts included",
            &["panel", "label", "model", "index", "r1", "r2"],
            &rows,
        )?);
        let mut header = vec!["panel", "label", "mu"];
        header.extend(SweepPoint::FIELDS);
        header.extend(["value", "r1", "r2"]);
        files.push(write_csv(
            &dir.join("winners.csv"),
            "panel, curve label, weight mu, maximizing parameters (rho, eta, fresh-power fraction s, coefficients a), mu*r1+(1-mu)*r2, maximizing rate pair in bits",
            &header,
            &wrows,
        )?);
    }
    if opts.formats.contains(&Format::Json) {
        let v = json!({
            "command": "region",
            "model": cfg.config.model.tag(),
            "panels": panels.iter().map(|p| json!({
                "name": p.name,
                "title": p.title,
                "channel": p.channel.as_ref().map(channel_json),
                "four_case_excess": p.four_case_excess,
                "curves": p.curves.iter().map(curve_json).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
        });
        files.push(write_json(&dir.join("region.json"), &v)?);
    }
    if opts.formats.contains(&Format::Svg) {
        for p in panels {
            let chart = Chart {
                title: p.title.clone(),
                x_label: "R1 [bits/channel use]".into(),
                y_label: "R2 [bits/channel use]".into(),
                series: p
                    .curves
                    .iter()
                    .map(|c| Series {
                        label: c.label.clone(),
                        points: c.region.vertices().iter().map(|v| (v.r1, v.r2)).collect(),
                        markers: c.model == "data",
                    })
                    .collect(),
                from_origin: true,
            };
            files.push(write_file(&dir.join(format!("region-{}.svg", p.name)), svg::render(&chart).as_bytes())?);
        }
    }
    Ok(files)
}
