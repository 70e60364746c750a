//! The method × size × λ × image benchmark matrix.

use std::cmp::Ordering;
use std::fs;
use std::path::Path;

use geqie::encodings::{benchmark_image, roundtrip_with, Method};
use geqie::exec::{self, Exec};
use geqie::metrics::psnr_display_cap;
use geqie::model::{qubit_budget, DEFAULT_MAX_QUBITS};
use geqie::rng::derive_seed_path;
use geqie::simcore::{NoiseMode, NoiseSpec};
use geqie::{GeqieError, Result};
use serde::{Deserialize, Serialize};

pub const DEFAULT_SHOTS: u64 = 1 << 14;
pub const DEFAULT_LAMBDAS: [f64; 7] = [0.0, 0.01, 0.1, 0.2, 0.5, 0.9, 1.0];
pub const DEFAULT_SIZES: [usize; 3] = [2, 4, 8];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BenchmarkConfig {
    pub methods: Vec<Method>,
    pub sizes: Vec<usize>,
    pub images_per_size: u64,
    pub lambdas: Vec<f64>,
    /// 0 uses exact outcome probabilities.
    pub shots: u64,
    pub max_qubits: usize,
    pub seed: u64,
    /// Defaults to trajectories when sampling, the global channel when exact.
    pub noise_mode: Option<NoiseMode>,
}

impl Default for BenchmarkConfig {
    fn default() -> Self {
        Self {
            methods: Method::IMAGE_METHODS.to_vec(),
            sizes: DEFAULT_SIZES.to_vec(),
            images_per_size: 8,
            lambdas: DEFAULT_LAMBDAS.to_vec(),
            shots: DEFAULT_SHOTS,
            max_qubits: DEFAULT_MAX_QUBITS,
            seed: 0,
            noise_mode: None,
        }
    }
}

impl BenchmarkConfig {
    pub fn validate(&self) -> Result<()> {
        if self.methods.contains(&Method::Mfrqi) {
            return Err(GeqieError::Domain(
                "the benchmark covers 2-D image methods only".into(),
            ));
        }
        if self.sizes.contains(&0) || self.images_per_size == 0 {
            return Err(GeqieError::Domain(
                "sizes and image count must be positive".into(),
            ));
        }
        if let Some(l) = self.lambdas.iter().find(|l| !(0.0..=1.0).contains(*l)) {
            return Err(GeqieError::Domain(format!("λ = {l} outside [0, 1]")));
        }
        Ok(())
    }

    fn noise(&self, lambda: f64) -> Result<NoiseSpec> {
        match self.noise_mode {
            Some(mode) => NoiseSpec::new(lambda, mode),
            None => NoiseSpec::with_default_mode(lambda, self.shots),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkRecord {
    pub method: String,
    pub size: usize,
    pub lambda: f64,
    pub shots: u64,
    pub image_id: u64,
    pub qubits: usize,
    pub seed: u64,
    pub pcc: Option<f64>,
    pub psnr_db: Option<f64>,
    pub skipped: Option<String>,
}

fn canonical(a: &BenchmarkRecord, b: &BenchmarkRecord) -> Ordering {
    (a.method.as_str(), a.size)
        .cmp(&(b.method.as_str(), b.size))
        .then(a.lambda.total_cmp(&b.lambda))
        .then(a.image_id.cmp(&b.image_id))
}

struct Cell {
    method: Method,
    size: usize,
    lambda_index: usize,
    lambda: f64,
    image_id: u64,
}

fn run_cell(config: &BenchmarkConfig, cell: &Cell) -> Result<BenchmarkRecord> {
    let model = cell.method.model();
    let dims = [cell.size, cell.size];
    let qubits = qubit_budget(model.as_ref(), &dims).total();
    let method_index = Method::ALL
        .iter()
        .position(|m| *m == cell.method)
        .unwrap_or(0);
    let seed = derive_seed_path(
        config.seed,
        &[
            method_index as u64,
            cell.size as u64,
            cell.lambda_index as u64,
            cell.image_id,
        ],
    );
    let mut record = BenchmarkRecord {
        method: cell.method.name().to_string(),
        size: cell.size,
        lambda: cell.lambda,
        shots: config.shots,
        image_id: cell.image_id,
        qubits,
        seed,
        pcc: None,
        psnr_db: None,
        skipped: None,
    };
    if qubits > config.max_qubits {
        record.skipped = Some(format!("needs {qubits} qubits, cap {}", config.max_qubits));
        return Ok(record);
    }
    let image = benchmark_image(cell.method.family(), cell.size, cell.image_id, config.seed)?;
    let noise = config.noise(cell.lambda)?;
    // cells already run in parallel, so each one stays sequential inside
    match roundtrip_with(
        model.as_ref(),
        &image,
        config.shots,
        &noise,
        seed,
        config.max_qubits,
        Exec::Sequential,
    ) {
        Ok(rt) => {
            record.pcc = Some(rt.metrics.pcc);
            record.psnr_db = Some(rt.metrics.psnr_db);
        }
        Err(e) => record.skipped = Some(e.to_string()),
    }
    Ok(record)
}

/// Runs every cell and returns records in canonical order
/// (method, size, λ, image id).
pub fn run(config: &BenchmarkConfig, exec: Exec) -> Result<Vec<BenchmarkRecord>> {
    config.validate()?;
    let mut cells = Vec::new();
    for &method in &config.methods {
        for &size in &config.sizes {
            for (lambda_index, &lambda) in config.lambdas.iter().enumerate() {
                for image_id in 0..config.images_per_size {
                    cells.push(Cell {
                        method,
                        size,
                        lambda_index,
                        lambda,
                        image_id,
                    });
                }
            }
        }
    }
    let mut records = exec::map_slice(exec, &cells, |c| run_cell(config, c))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    records.sort_by(canonical);
    Ok(records)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SummaryRow {
    pub method: String,
    pub size: usize,
    pub lambda: f64,
    pub shots: u64,
    pub qubits: usize,
    pub images: usize,
    pub skipped: bool,
    pub pcc_mean: Option<f64>,
    /// Mean over finite PSNR values only.
    pub psnr_mean_db: Option<f64>,
    pub psnr_inf_count: usize,
    /// Mean with every PSNR capped at the display ceiling.
    pub psnr_display_db: Option<f64>,
}

fn mean(values: impl Iterator<Item = f64>) -> Option<f64> {
    let (n, sum) = values.fold((0usize, 0.0), |(n, s), v| (n + 1, s + v));
    (n > 0).then(|| sum / n as f64)
}

/// Per (method, size, λ) averages, in the records' order.
pub fn summarize(records: &[BenchmarkRecord]) -> Vec<SummaryRow> {
    records
        .chunk_by(|a, b| a.method == b.method && a.size == b.size && a.lambda == b.lambda)
        .map(|group| {
            let scored: Vec<&BenchmarkRecord> =
                group.iter().filter(|r| r.skipped.is_none()).collect();
            let psnrs: Vec<f64> = scored.iter().filter_map(|r| r.psnr_db).collect();
            SummaryRow {
                method: group[0].method.clone(),
                size: group[0].size,
                lambda: group[0].lambda,
                shots: group[0].shots,
                qubits: group[0].qubits,
                images: scored.len(),
                skipped: scored.is_empty(),
                pcc_mean: mean(scored.iter().filter_map(|r| r.pcc)),
                psnr_mean_db: mean(psnrs.iter().copied().filter(|p| p.is_finite())),
                psnr_inf_count: psnrs.iter().filter(|p| p.is_infinite()).count(),
                psnr_display_db: mean(psnrs.iter().map(|&p| psnr_display_cap(p))),
            }
        })
        .collect()
}

fn write_csv<T: Serialize>(path: &Path, rows: &[T]) -> anyhow::Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// Wide table with λ as the x column and one PCC and one capped-PSNR column
/// per evaluated (method, size).
pub fn plotdata(summary: &[SummaryRow]) -> Vec<Vec<String>> {
    let mut series: Vec<(String, usize)> = Vec::new();
    let mut lambdas: Vec<f64> = Vec::new();
    for row in summary.iter().filter(|r| !r.skipped) {
        if !series.contains(&(row.method.clone(), row.size)) {
            series.push((row.method.clone(), row.size));
        }
        if !lambdas.contains(&row.lambda) {
            lambdas.push(row.lambda);
        }
    }
    lambdas.sort_by(f64::total_cmp);
    let mut header = vec!["lambda".to_string()];
    for (m, s) in &series {
        header.push(format!("{m}_{s}x{s}_pcc"));
        header.push(format!("{m}_{s}x{s}_psnr_display_db"));
    }
    let mut table = vec![header];
    for &lambda in &lambdas {
        let mut row = vec![lambda.to_string()];
        for (m, s) in &series {
            let hit = summary
                .iter()
                .find(|r| &r.method == m && r.size == *s && r.lambda == lambda);
            row.push(fmt_opt(hit.and_then(|r| r.pcc_mean)));
            row.push(fmt_opt(hit.and_then(|r| r.psnr_display_db)));
        }
        table.push(row);
    }
    table
}

/// Writes `records.csv`, `summary.csv` and `plotdata.csv` into `dir`.
pub fn write_outputs(dir: &Path, records: &[BenchmarkRecord]) -> anyhow::Result<Vec<SummaryRow>> {
    fs::create_dir_all(dir)?;
    write_csv(&dir.join("records.csv"), records)?;
    let summary = summarize(records);
    write_csv(&dir.join("summary.csv"), &summary)?;
    let mut w = csv::Writer::from_path(dir.join("plotdata.csv"))?;
    for row in plotdata(&summary) {
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(summary)
}

/// Plain-text table: one line per (method, size), mean PCC across λ.
pub fn render_table(summary: &[SummaryRow], lambdas: &[f64]) -> String {
    let mut out = format!("{:<8} {:>5} {:>7}", "method", "size", "qubits");
    for l in lambdas {
        out.push_str(&format!(" {:>8}", format!("λ={l}")));
    }
    out.push('\n');
    for group in summary.chunk_by(|a, b| a.method == b.method && a.size == b.size) {
        let r = &group[0];
        out.push_str(&format!(
            "{:<8} {:>5} {:>7}",
            r.method,
            format!("{0}x{0}", r.size),
            r.qubits
        ));
        for l in lambdas {
            let cell = match group.iter().find(|g| g.lambda == *l) {
                Some(g) if g.skipped => "skipped".to_string(),
                Some(g) => g.pcc_mean.map(|p| format!("{p:.4}")).unwrap_or_default(),
                None => String::new(),
            };
            out.push_str(&format!(" {cell:>8}"));
        }
        out.push('\n');
    }
    out
}
