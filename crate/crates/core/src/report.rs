//! CSV and JSON writers for every pipeline product, and the feature CSV reader.
//!
//! Floats are written in shortest round-trip form so a feature file read
//! back reproduces the matrix bit for bit.

use std::io::{Read, Write};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::experiment::ExperimentResult;
use crate::features::FeatureMatrix;
use crate::graph::TimeLabel;
use crate::lookout::{AnomalyReport, GpdFit};
use crate::embed::EmbeddedPoints;
use crate::residualize::ResidualMatrix;
use crate::stats::{median, quantile};

/// `t,label,score,cond_prob,anomaly`, one row per time point.
pub fn write_report_csv<W: Write>(report: &AnomalyReport, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["t", "label", "score", "cond_prob", "anomaly"])?;
    for (i, label) in report.time_labels.iter().enumerate() {
        w.write_record([
            (i + 1).to_string(),
            label.to_string(),
            report.outlier_scores[i].to_string(),
            report.probabilities[i].to_string(),
            u8::from(report.flags[i]).to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct ReportJson<'a> {
    alpha: f64,
    bandwidth: f64,
    threshold: f64,
    exceedance_rate: f64,
    gpd: &'a GpdFit,
    time_labels: &'a [TimeLabel],
    scores: &'a [f64],
    cond_prob: &'a [f64],
    anomaly: &'a [bool],
    flagged: Vec<String>,
}

/// The report with its tail-fit diagnostics as pretty JSON.
pub fn write_report_json<W: Write>(report: &AnomalyReport, out: W) -> Result<()> {
    let doc = ReportJson {
        alpha: report.alpha,
        bandwidth: report.bandwidth,
        threshold: report.gpd.threshold,
        exceedance_rate: report.gpd.exceedance_rate,
        gpd: &report.gpd,
        time_labels: &report.time_labels,
        scores: &report.outlier_scores,
        cond_prob: &report.probabilities,
        anomaly: &report.flags,
        flagged: report.flagged().iter().map(|&i| report.time_labels[i].to_string()).collect(),
    };
    serde_json::to_writer_pretty(out, &doc)?;
    Ok(())
}

/// `t` followed by one column per feature; undefined values are empty cells.
pub fn write_features_csv<W: Write>(fm: &FeatureMatrix, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["t".to_string()];
    header.extend(fm.names().iter().cloned());
    w.write_record(&header)?;
    for (label, row) in fm.time_labels().iter().zip(fm.rows()) {
        let mut record = vec![label.to_string()];
        record.extend(row.iter().map(|v| v.map(|x| x.to_string()).unwrap_or_default()));
        w.write_record(&record)?;
    }
    w.flush()?;
    Ok(())
}

/// Reads a matrix written by [`write_features_csv`].
pub fn read_features_csv<R: Read>(input: R, source: &str) -> Result<FeatureMatrix> {
    let mut r = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(input);
    let header = r.headers()?.clone();
    if header.len() < 2 || !header[0].eq_ignore_ascii_case("t") {
        return Err(Error::Parse {
            path: source.into(),
            line: 1,
            message: "expected a header starting with 't' followed by feature names".into(),
        });
    }
    let names: Vec<String> = header.iter().skip(1).map(str::to_string).collect();
    let mut raw_labels = Vec::new();
    let mut rows = Vec::new();
    for (i, record) in r.records().enumerate() {
        let record = record?;
        let line = i as u64 + 2;
        if record.len() != header.len() {
            return Err(Error::Parse {
                path: source.into(),
                line,
                message: format!("expected {} fields, found {}", header.len(), record.len()),
            });
        }
        raw_labels.push(record[0].to_string());
        let row = record
            .iter()
            .skip(1)
            .map(|cell| {
                if cell.is_empty() || cell.eq_ignore_ascii_case("na") {
                    Ok(None)
                } else {
                    cell.parse::<f64>().map(Some).map_err(|_| Error::Parse {
                        path: source.into(),
                        line,
                        message: format!("'{cell}' is not a number"),
                    })
                }
            })
            .collect::<Result<Vec<_>>>()?;
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::NoSnapshots(source.into()));
    }
    FeatureMatrix::new(names, rows, TimeLabel::parse_all(&raw_labels))
}

/// `t,score1,score2,...`
pub fn write_embedding_csv<W: Write>(emb: &EmbeddedPoints, labels: &[TimeLabel], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let k = emb.directions.len();
    let mut header = vec!["t".to_string()];
    header.extend((1..=k).map(|i| format!("score{i}")));
    w.write_record(&header)?;
    for (label, row) in labels.iter().zip(&emb.scores) {
        let mut record = vec![label.to_string()];
        record.extend(row.iter().map(f64::to_string));
        w.write_record(&record)?;
    }
    w.flush()?;
    Ok(())
}

/// One row per modelled feature: selected order, AICc and residual checks.
pub fn write_diagnostics_csv<W: Write>(rm: &ResidualMatrix, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "feature",
        "p",
        "d",
        "q",
        "constant",
        "aicc",
        "residual_variance",
        "ljung_box",
        "ljung_box_p",
        "imputed",
    ])?;
    for fit in rm.fits() {
        let o = fit.model.order;
        w.write_record([
            fit.name.clone(),
            o.p.to_string(),
            o.d.to_string(),
            o.q.to_string(),
            fit.model.constant.map(|c| c.to_string()).unwrap_or_default(),
            fit.model.aicc.to_string(),
            fit.residual_variance.to_string(),
            fit.ljung_box.to_string(),
            fit.ljung_box_p.to_string(),
            fit.imputed.to_string(),
        ])?;
    }
    for name in rm.dropped() {
        w.write_record([name.as_str(), "", "", "", "", "", "", "", "", "dropped"])?;
    }
    w.flush()?;
    Ok(())
}

/// `experiment,p_star,rep,seed,auc`; failed replications have an empty AUC.
pub fn write_experiment_csv<W: Write>(name: &str, results: &[ExperimentResult], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["experiment", "p_star", "rep", "seed", "auc"])?;
    for res in results {
        for r in &res.replications {
            w.write_record([
                name.to_string(),
                res.spec.p_star.to_string(),
                r.rep.to_string(),
                r.seed.to_string(),
                r.auc.map(|a| a.to_string()).unwrap_or_default(),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Median and quartiles of the AUCs for each offset.
pub fn write_experiment_summary_csv<W: Write>(name: &str, results: &[ExperimentResult], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["experiment", "p_star", "n", "failed", "q1", "median", "q3"])?;
    for res in results {
        let aucs = res.auc_values();
        let fmt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        w.write_record([
            name.to_string(),
            res.spec.p_star.to_string(),
            aucs.len().to_string(),
            res.failures().count().to_string(),
            fmt(quantile(&aucs, 0.25)),
            fmt(median(&aucs)),
            fmt(quantile(&aucs, 0.75)),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// A plain SVG line chart of the probabilities with a dashed line at alpha.
pub fn probability_chart_svg(report: &AnomalyReport) -> String {
    let (width, height) = (800.0, 400.0);
    let (left, right, top, bottom) = (60.0, 20.0, 20.0, 50.0);
    let plot_w = width - left - right;
    let plot_h = height - top - bottom;
    let n = report.probabilities.len().max(2);
    let x = |i: usize| left + plot_w * i as f64 / (n - 1) as f64;
    let y = |p: f64| top + plot_h * (1.0 - p.clamp(0.0, 1.0));

    let mut svg = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\" viewBox=\"0 0 {width} {height}\">\n"
    );
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg += &format!(
        "<line x1=\"{left}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\"/>\n",
        top + plot_h,
        left + plot_w,
        top + plot_h
    );
    svg += &format!("<line x1=\"{left}\" y1=\"{top}\" x2=\"{left}\" y2=\"{}\" stroke=\"black\"/>\n", top + plot_h);
    for tick in [0.0, 0.25, 0.5, 0.75, 1.0] {
        svg += &format!(
            "<text x=\"{}\" y=\"{:.1}\" font-size=\"11\" text-anchor=\"end\">{tick}</text>\n",
            left - 6.0,
            y(tick) + 4.0
        );
    }
    let step = (n / 10).max(1);
    for i in (0..report.time_labels.len()).step_by(step) {
        svg += &format!(
            "<text x=\"{:.1}\" y=\"{}\" font-size=\"11\" text-anchor=\"middle\">{}</text>\n",
            x(i),
            top + plot_h + 16.0,
            xml_escape(&report.time_labels[i].to_string())
        );
    }
    let points: Vec<String> = report
        .probabilities
        .iter()
        .enumerate()
        .map(|(i, &p)| format!("{:.2},{:.2}", x(i), y(p)))
        .collect();
    svg += &format!(
        "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"1.5\" points=\"{}\"/>\n",
        points.join(" ")
    );
    for i in report.flagged() {
        svg += &format!(
            "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"3.5\" fill=\"firebrick\"/>\n",
            x(i),
            y(report.probabilities[i])
        );
    }
    svg += &format!(
        "<line x1=\"{left}\" y1=\"{0:.2}\" x2=\"{1}\" y2=\"{0:.2}\" stroke=\"gray\" stroke-dasharray=\"6,4\"/>\n",
        y(report.alpha),
        left + plot_w
    );
    svg += &format!(
        "<text x=\"{}\" y=\"{}\" font-size=\"12\" text-anchor=\"middle\">time</text>\n",
        left + plot_w / 2.0,
        height - 10.0
    );
    svg += &format!(
        "<text x=\"14\" y=\"{0}\" font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 14 {0})\">conditional probability</text>\n",
        top + plot_h / 2.0
    );
    svg += "</svg>\n";
    svg
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
