use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use geqie::cosmicweb::{
    cosmic_roundtrip_with, histogram, normalize, spread_sigma, voxelize_with, NormScheme,
    SyntheticCloud, VoxelGrid, COSMIC_MAX_QUBITS,
};
use geqie::encodings::{encode, Method, EXACT};
use geqie::exec::Exec;
use geqie::formats::{
    read_grid, read_points, sidecar_path, state_from_bytes, state_to_bytes, unitary_to_bytes,
    unitary_to_json, write_grid, write_points, CountsFile, GRID_MAGIC,
};
use geqie::model::{
    completion_unitary, qubit_budget, verify_model, ImageArray, DEFAULT_MAX_QUBITS,
};
use geqie::simcore::{
    measure_probabilities, sample_counts, sample_counts_trajectories, DensityMatrix, NoiseMode,
    StateVector,
};
use geqie::GeqieError;

use crate::benchmark::{self, BenchmarkConfig, DEFAULT_SHOTS};
use crate::image_io::{self, Encoding};

pub const EXIT_OK: u8 = 0;
pub const EXIT_INTERNAL: u8 = 1;
pub const EXIT_BAD_INPUT: u8 = 2;
pub const EXIT_CAPACITY: u8 = 3;

/// Quantum image encodings: encode, simulate, retrieve, benchmark.
#[derive(Debug, Parser)]
#[command(name = "geqie", version)]
pub struct Cli {
    /// Run on one thread.
    #[arg(long, global = true)]
    pub sequential: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Encode an image into a statevector and/or unitary.
    Encode(EncodeArgs),
    /// Measure a state (optionally under depolarizing noise).
    Simulate(SimulateArgs),
    /// Decode an image from measurement counts.
    Retrieve(RetrieveArgs),
    /// Run the method × size × λ benchmark matrix.
    Benchmark(BenchmarkArgs),
    /// Check a method's encoding model on a shape.
    Verify(VerifyArgs),
    /// Particle catalogues and density grids.
    #[command(subcommand)]
    Cosmic(CosmicCommand),
}

#[derive(Debug, Args)]
pub struct CapArgs {
    /// Largest register to simulate.
    #[arg(long, env = "GEQIE_MAX_QUBITS", default_value_t = DEFAULT_MAX_QUBITS)]
    pub max_qubits: usize,
}

#[derive(Debug, Args)]
pub struct EncodeArgs {
    #[arg(long)]
    pub method: Method,
    /// PGM/PPM image, or a GQV1 grid with values in [0, 1] for mfrqi.
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, required_unless_present = "output_unitary")]
    pub output_state: Option<PathBuf>,
    /// Binary GQU1; a JSON copy is written next to it for up to 4 qubits.
    #[arg(long)]
    pub output_unitary: Option<PathBuf>,
    #[command(flatten)]
    pub cap: CapArgs,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// GQS1 statevector.
    #[arg(long, conflicts_with_all = ["method", "input"], required_unless_present = "method")]
    pub state: Option<PathBuf>,
    #[arg(long, requires = "input")]
    pub method: Option<Method>,
    #[arg(long, requires = "method")]
    pub input: Option<PathBuf>,
    /// 0 emits exact probabilities.
    #[arg(long, default_value_t = DEFAULT_SHOTS)]
    pub shots: u64,
    #[arg(long, default_value_t = 0.0)]
    pub lambda: f64,
    /// global, per-qubit or trajectories; defaults to trajectories when
    /// sampling and global for exact probabilities.
    #[arg(long)]
    pub noise_mode: Option<NoiseMode>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Counts JSON; stdout when omitted.
    #[arg(long)]
    pub output_counts: Option<PathBuf>,
    #[command(flatten)]
    pub cap: CapArgs,
}

#[derive(Debug, Args)]
pub struct RetrieveArgs {
    /// Defaults to the method recorded in the counts file.
    #[arg(long)]
    pub method: Option<Method>,
    #[arg(long)]
    pub counts: PathBuf,
    /// Axis extents such as `4x4`; defaults to those recorded in the counts file.
    #[arg(long)]
    pub dims: Option<Dims>,
    /// PGM/PPM, or a GQV1 grid for mfrqi.
    #[arg(long)]
    pub output_image: PathBuf,
    /// Write plain-text P2/P3 instead of binary P5/P6.
    #[arg(long)]
    pub ascii: bool,
}

#[derive(Debug, Args)]
pub struct BenchmarkArgs {
    /// JSON configuration; flags given explicitly override its fields.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, value_delimiter = ',')]
    pub methods: Option<Vec<Method>>,
    #[arg(long, value_delimiter = ',')]
    pub sizes: Option<Vec<usize>>,
    #[arg(long)]
    pub images: Option<u64>,
    #[arg(long, value_delimiter = ',')]
    pub lambdas: Option<Vec<f64>>,
    #[arg(long)]
    pub shots: Option<u64>,
    #[arg(long, env = "GEQIE_MAX_QUBITS")]
    pub max_qubits: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub noise_mode: Option<NoiseMode>,
    #[arg(long)]
    pub output_dir: PathBuf,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub method: Method,
    #[arg(long)]
    pub dims: Dims,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub cap: CapArgs,
}

#[derive(Debug, Subcommand)]
pub enum CosmicCommand {
    /// Count particles per voxel.
    Voxelize {
        /// GQP1 binary, or ASCII `x y z` lines with a `<path>.json` sidecar.
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        resolution: usize,
        #[arg(long)]
        output: PathBuf,
    },
    /// Map densities into [0, 1).
    Normalize {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value = "e-median")]
        scheme: NormScheme,
        #[arg(long)]
        output: PathBuf,
    },
    /// Print a density histogram as CSV.
    Histogram {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 20)]
        bins: usize,
        /// CSV file; stdout when omitted.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Normalize, encode with mfrqi, sample, decode and denormalize a grid.
    Roundtrip {
        /// Raw (un-normalized) density grid.
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value = "e-median")]
        scheme: NormScheme,
        #[arg(long, default_value_t = 1 << 20)]
        shots: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = COSMIC_MAX_QUBITS)]
        max_qubits: usize,
        /// Retrieved, denormalized grid.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Write a seeded synthetic clustered point set.
    Generate {
        #[arg(long)]
        output: PathBuf,
        #[arg(long, default_value_t = 100_000)]
        points: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// GQP1 binary instead of ASCII with sidecar.
        #[arg(long)]
        binary: bool,
    },
}

/// Axis extents written `4x4`, `4,4` or `16x16x16`, rows first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dims(pub Vec<usize>);

impl std::str::FromStr for Dims {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let dims: Vec<usize> = s
            .split(['x', 'X', ','])
            .map(|p| {
                p.trim()
                    .parse::<usize>()
                    .map_err(|_| format!("bad extent `{p}` in `{s}`"))
            })
            .collect::<Result<_, _>>()?;
        if dims.contains(&0) {
            return Err(format!("bad dimensions `{s}`"));
        }
        Ok(Dims(dims))
    }
}

/// Exit status for an error: 3 for capacity, 2 for bad input, 1 otherwise.
pub fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if let Some(e) = cause.downcast_ref::<GeqieError>() {
            return match e {
                GeqieError::Capacity { .. } => EXIT_CAPACITY,
                GeqieError::Model(_) => EXIT_INTERNAL,
                _ => EXIT_BAD_INPUT,
            };
        }
        if cause.is::<std::io::Error>()
            || cause.is::<serde_json::Error>()
            || cause.is::<csv::Error>()
        {
            return EXIT_BAD_INPUT;
        }
    }
    EXIT_INTERNAL
}

fn read_encodable(path: &Path, method: Method) -> anyhow::Result<ImageArray> {
    let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    if bytes.starts_with(GRID_MAGIC) {
        let grid = read_grid(path)?;
        return Ok(ImageArray::new(
            grid.resolution().to_vec(),
            1,
            grid.values().to_vec(),
        )?);
    }
    if method == Method::Mfrqi {
        bail!(GeqieError::Parse("mfrqi expects a GQV1 grid".into()));
    }
    Ok(image_io::decode(&bytes)?)
}

fn write_output(path: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display()))?,
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
        }
    }
    Ok(())
}

fn cmd_encode(args: &EncodeArgs) -> anyhow::Result<()> {
    let image = read_encodable(&args.input, args.method)?;
    let state = encode(args.method, &image, args.cap.max_qubits)?;
    println!(
        "{}: {:?} -> {} qubits",
        args.method,
        image.dims(),
        state.n_qubits()
    );
    if let Some(p) = &args.output_state {
        fs::write(p, state_to_bytes(&state))?;
    }
    if let Some(p) = &args.output_unitary {
        let u = completion_unitary(&state)?;
        fs::write(p, unitary_to_bytes(&u))?;
        if let Some(json) = unitary_to_json(&u) {
            fs::write(sidecar_path(p), json)?;
        }
    }
    Ok(())
}

fn cmd_simulate(args: &SimulateArgs) -> anyhow::Result<()> {
    let (state, source) = match (&args.state, args.method, &args.input) {
        (Some(path), _, _) => (state_from_bytes(&fs::read(path)?)?, None),
        (None, Some(method), Some(input)) => {
            let image = read_encodable(input, method)?;
            let state = encode(method, &image, args.cap.max_qubits)?;
            (state, Some((method, image.dims().to_vec())))
        }
        _ => bail!(GeqieError::Domain(
            "give --state or --method with --input".into()
        )),
    };
    if state.n_qubits() > args.cap.max_qubits {
        bail!(GeqieError::Capacity {
            required: state.n_qubits(),
            allowed: args.cap.max_qubits
        });
    }
    if !(0.0..=1.0).contains(&args.lambda) {
        bail!(GeqieError::Domain(format!(
            "λ = {} outside [0, 1]",
            args.lambda
        )));
    }
    let mode = args.noise_mode.unwrap_or(if args.shots == EXACT {
        NoiseMode::Global
    } else {
        NoiseMode::Trajectories
    });
    let n = state.n_qubits();
    let mut file = if mode == NoiseMode::Trajectories {
        if args.shots == EXACT {
            bail!(GeqieError::Domain("trajectories need --shots > 0".into()));
        }
        CountsFile::from_counts(&sample_counts_trajectories(
            &state,
            args.lambda,
            args.shots,
            args.seed,
        )?)
    } else {
        let probs = channel_probabilities(&state, args.lambda, mode)?;
        if args.shots == EXACT {
            CountsFile::from_probabilities(n, &probs)
        } else {
            CountsFile::from_counts(&sample_counts(&probs, args.shots, args.seed)?)
        }
    };
    if let Some((method, dims)) = source {
        file = file.with_source(method.name(), &dims);
    }
    let mut text = serde_json::to_string_pretty(&file)?;
    text.push('\n');
    write_output(args.output_counts.as_deref(), &text)
}

/// Outcome distribution through the density matrix; λ = 0 skips it.
fn channel_probabilities(
    state: &StateVector,
    lambda: f64,
    mode: NoiseMode,
) -> anyhow::Result<Vec<f64>> {
    if lambda == 0.0 {
        return Ok(measure_probabilities(state));
    }
    let rho = DensityMatrix::from_state(state)?;
    let rho = match mode {
        NoiseMode::Global => rho.apply_global_depolarizing(lambda)?,
        _ => rho.apply_all_qubit_depolarizing(lambda)?,
    };
    Ok(measure_probabilities(&rho))
}

fn cmd_retrieve(args: &RetrieveArgs) -> anyhow::Result<()> {
    let text = fs::read_to_string(&args.counts)?;
    let file: CountsFile = serde_json::from_str(&text)
        .map_err(|e| GeqieError::Parse(format!("{}: {e}", args.counts.display())))?;
    let method = match (args.method, &file.method) {
        (Some(m), _) => m,
        (None, Some(name)) => name.parse()?,
        (None, None) => bail!(GeqieError::Domain(
            "counts file names no method; pass --method".into()
        )),
    };
    let dims = match (&args.dims, &file.dims) {
        (Some(Dims(d)), _) | (None, Some(d)) => d.clone(),
        (None, None) => bail!(GeqieError::Domain(
            "counts file has no dims; pass --dims".into()
        )),
    };
    let model = method.model();
    let expected = qubit_budget(model.as_ref(), &dims).total();
    if file.n_qubits != expected {
        bail!(GeqieError::Shape(format!(
            "{method} on {dims:?} uses {expected} qubits but the counts cover {}",
            file.n_qubits
        )));
    }
    let image = model.retrieve(&file.weights()?, &dims)?;
    if method == Method::Mfrqi {
        let [a, b, c] = dims[..] else {
            bail!(GeqieError::Shape("grid output needs three axes".into()));
        };
        write_grid(
            &args.output_image,
            &VoxelGrid::new([a, b, c], image.values().to_vec())?,
        )?;
    } else {
        let encoding = if args.ascii {
            Encoding::Ascii
        } else {
            Encoding::Binary
        };
        image_io::write(&args.output_image, &image, encoding)?;
    }
    Ok(())
}

fn benchmark_config(args: &BenchmarkArgs) -> anyhow::Result<BenchmarkConfig> {
    let mut config = match &args.config {
        Some(path) => serde_json::from_str(&fs::read_to_string(path)?)
            .map_err(|e| GeqieError::Parse(format!("{}: {e}", path.display())))?,
        None => BenchmarkConfig::default(),
    };
    if let Some(v) = &args.methods {
        config.methods = v.clone();
    }
    if let Some(v) = &args.sizes {
        config.sizes = v.clone();
    }
    if let Some(v) = args.images {
        config.images_per_size = v;
    }
    if let Some(v) = &args.lambdas {
        config.lambdas = v.clone();
    }
    if let Some(v) = args.shots {
        config.shots = v;
    }
    if let Some(v) = args.max_qubits {
        config.max_qubits = v;
    }
    if let Some(v) = args.seed {
        config.seed = v;
    }
    if args.noise_mode.is_some() {
        config.noise_mode = args.noise_mode;
    }
    Ok(config)
}

fn cmd_benchmark(args: &BenchmarkArgs, exec: Exec) -> anyhow::Result<()> {
    let config = benchmark_config(args)?;
    let records = benchmark::run(&config, exec)?;
    let summary = benchmark::write_outputs(&args.output_dir, &records)?;
    fs::write(
        args.output_dir.join("config.json"),
        serde_json::to_string_pretty(&config)?,
    )?;
    print!("{}", benchmark::render_table(&summary, &config.lambdas));
    let skipped = summary.iter().filter(|r| r.skipped).count();
    println!(
        "{} records, {skipped} skipped summary cells, shots {} ({}), cap {} qubits",
        records.len(),
        config.shots,
        if config.shots == EXACT {
            "exact probabilities"
        } else {
            "sampled"
        },
        config.max_qubits
    );
    Ok(())
}

fn cmd_verify(args: &VerifyArgs) -> anyhow::Result<()> {
    let dims = &args.dims.0;
    let report = verify_model(
        args.method.model().as_ref(),
        dims,
        args.cap.max_qubits,
        args.seed,
    );
    print!("{report}");
    if !report.passed() {
        bail!("verification of {} on {dims:?} failed", args.method);
    }
    Ok(())
}

fn cmd_cosmic(cmd: &CosmicCommand, exec: Exec) -> anyhow::Result<()> {
    match cmd {
        CosmicCommand::Voxelize {
            input,
            resolution,
            output,
        } => {
            let cloud = read_points(input)?;
            let grid = voxelize_with(&cloud, *resolution, exec)?;
            write_grid(output, &grid)?;
            println!(
                "{} points -> {}^3 grid, {:.4} empty",
                cloud.len(),
                resolution,
                grid.zero_fraction()
            );
        }
        CosmicCommand::Normalize {
            input,
            scheme,
            output,
        } => {
            let grid = normalize(&read_grid(input)?, *scheme)?;
            write_grid(output, &grid)?;
            let scale = grid.normalization().map(|n| n.scale).unwrap_or_default();
            println!("{scheme}: scale {scale}, sigma {:.6}", spread_sigma(&grid));
        }
        CosmicCommand::Histogram {
            input,
            bins,
            output,
        } => {
            let grid = read_grid(input)?;
            let h = histogram(&grid, *bins)?;
            let mut text = String::from("lower,upper,count\n");
            for (i, c) in h.counts.iter().enumerate() {
                text.push_str(&format!("{},{},{c}\n", h.edges[i], h.edges[i + 1]));
            }
            write_output(output.as_deref(), &text)?;
            if output.is_some() {
                println!("sigma {:.6}", spread_sigma(&grid));
            }
        }
        CosmicCommand::Roundtrip {
            input,
            scheme,
            shots,
            seed,
            max_qubits,
            output,
        } => {
            let grid = read_grid(input)?;
            let rt = cosmic_roundtrip_with(&grid, *scheme, *shots, *seed, *max_qubits, exec)?;
            println!(
                "{} qubits, {scheme}, shots {shots}: PCC normalized {:.6}, PCC denormalized {:.6}",
                rt.qubits, rt.pcc_normalized, rt.pcc_denormalized
            );
            if let Some(p) = output {
                write_grid(p, &rt.retrieved)?;
            }
        }
        CosmicCommand::Generate {
            output,
            points,
            seed,
            binary,
        } => {
            let cloud = SyntheticCloud {
                points: *points,
                ..Default::default()
            }
            .generate(*seed)?;
            write_points(output, &cloud, *binary)?;
            println!("{} points in a {} box", cloud.len(), cloud.box_size());
        }
    }
    Ok(())
}

pub fn run(cli: &Cli) -> anyhow::Result<()> {
    let exec = if cli.sequential {
        Exec::Sequential
    } else {
        Exec::Parallel
    };
    match &cli.command {
        Command::Encode(a) => cmd_encode(a),
        Command::Simulate(a) => cmd_simulate(a),
        Command::Retrieve(a) => cmd_retrieve(a),
        Command::Benchmark(a) => cmd_benchmark(a, exec),
        Command::Verify(a) => cmd_verify(a),
        Command::Cosmic(c) => cmd_cosmic(c, exec),
    }
}
