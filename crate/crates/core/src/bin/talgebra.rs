use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use talgebra::bench::{
    self, emit_reports, load_idx, parse_dims, pgm, reconstruct_centers, run_experiment,
    sample_dataset, sample_split, Dataset, Engine, ExperimentOptions, LabeledImage, PsnrReport,
    Variant,
};
use talgebra::compound::Image;
use talgebra::{Error, Parallelism, Precision, Result};

#[derive(Parser)]
#[command(name = "talgebra", version, about = "Tensorial PCA reconstruction benchmark")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Score PCA and TPCA variants over a grid of feature dimensions.
    Bench(BenchArgs),
    /// Write one query image and its reconstruction as PGM files.
    Reconstruct(ReconstructArgs),
}

#[derive(Args)]
struct DataArgs {
    #[arg(long)]
    train_images: PathBuf,
    #[arg(long)]
    train_labels: PathBuf,
    /// Draw query images from a second file pair instead of the training pool.
    #[arg(long, requires = "test_labels")]
    test_images: Option<PathBuf>,
    #[arg(long, requires = "test_images")]
    test_labels: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 60)]
    per_class_train: usize,
    #[arg(long, default_value_t = 10)]
    per_class_query: usize,
    /// Storage precision of Fourier-domain data (default: c64 for TPCA-B, c128 otherwise).
    #[arg(long, value_parser = parse_precision)]
    precision: Option<Precision>,
    /// Worker threads (default: TALGEBRA_THREADS, then the core count).
    #[arg(long)]
    parallelism: Option<usize>,
    #[arg(long, value_enum, default_value_t = EngineArg::Auto)]
    engine: EngineArg,
}

#[derive(Args)]
struct BenchArgs {
    #[command(flatten)]
    data: DataArgs,
    #[arg(long, default_value = "pca,tpca,tpca-a,tpca-b,tpca-x,tpca-y,tpca-z")]
    variants: String,
    /// `start:stop:step` (inclusive) or a comma-separated list.
    #[arg(long, default_value = "50:500:50")]
    dims: String,
    #[arg(long)]
    out: PathBuf,
    /// Run TPCA-B on 10 training and 2 query images per class, reported under `<out>/reduced`.
    #[arg(long)]
    reduced: bool,
}

#[derive(Args)]
struct ReconstructArgs {
    #[command(flatten)]
    data: DataArgs,
    #[arg(long)]
    variant: String,
    #[arg(long)]
    d: usize,
    /// Position in the sampled query set (the `image_id` of the per-image reports).
    #[arg(long)]
    image_index: usize,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum EngineArg {
    Auto,
    Materialized,
    Streaming,
}

fn parse_precision(s: &str) -> std::result::Result<Precision, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

impl DataArgs {
    fn options(&self) -> Result<ExperimentOptions> {
        Ok(ExperimentOptions {
            precision: self.precision,
            parallelism: Parallelism::resolve(self.parallelism)?,
            engine: match self.engine {
                EngineArg::Auto => Engine::Auto,
                EngineArg::Materialized => Engine::Materialized,
                EngineArg::Streaming => Engine::Streaming,
            },
        })
    }

    fn pools(&self) -> Result<(Vec<LabeledImage>, Option<Vec<LabeledImage>>)> {
        let train = load_idx(&self.train_images, &self.train_labels)?;
        let test = match (&self.test_images, &self.test_labels) {
            (Some(i), Some(l)) => Some(load_idx(i, l)?),
            _ => None,
        };
        Ok((train, test))
    }

    fn sample(
        &self,
        pools: &(Vec<LabeledImage>, Option<Vec<LabeledImage>>),
        per_train: usize,
        per_query: usize,
    ) -> Result<Dataset> {
        match &pools.1 {
            Some(test) => sample_split(&pools.0, test, self.seed, per_train, per_query),
            None => sample_dataset(&pools.0, self.seed, per_train, per_query),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Bench(args) => bench_cmd(&args),
        Command::Reconstruct(args) => reconstruct_cmd(&args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn bench_cmd(args: &BenchArgs) -> Result<()> {
    let variants = Variant::parse_list(&args.variants)?;
    let dims = parse_dims(&args.dims)?;
    let options = args.data.options()?;
    let pools = args.data.pools()?;
    let dataset = args
        .data
        .sample(&pools, args.data.per_class_train, args.data.per_class_query)?;
    eprintln!(
        "sampled {} training and {} query images (seed {}, {}); {} threads",
        dataset.train.len(),
        dataset.query.len(),
        dataset.seed,
        bench::sample::SAMPLER,
        options.parallelism.threads()
    );

    let reduced_b = args.reduced && variants.contains(&Variant::TpcaB);
    let main: Vec<Variant> = variants
        .iter()
        .copied()
        .filter(|&v| !(reduced_b && v == Variant::TpcaB))
        .collect();
    if !main.is_empty() {
        let report = run_experiment(&dataset, &main, &dims, &options)?;
        finish(&report, &args.out)?;
    }
    if reduced_b {
        let small = args.data.sample(&pools, 10, 2)?;
        let mut subset = vec![Variant::TpcaB];
        if variants.contains(&Variant::Pca) {
            subset.insert(0, Variant::Pca);
        }
        eprintln!(
            "reduced run: {} training and {} query images",
            small.train.len(),
            small.query.len()
        );
        let report = run_experiment(&small, &subset, &dims, &options)?;
        finish(&report, &args.out.join("reduced"))?;
    }
    Ok(())
}

fn finish(report: &PsnrReport, out: &Path) -> Result<()> {
    for v in &report.variants {
        eprintln!(
            "{:<7} {} {:<12} {:>8.1}s",
            v.variant.name(),
            v.precision.name(),
            v.engine.name(),
            v.elapsed.as_secs_f64()
        );
    }
    print!("{:>6}", "d");
    for v in &report.variants {
        print!(" {:>9}", v.variant.name());
    }
    println!();
    for (t, d) in report.dims.iter().enumerate() {
        print!("{d:>6}");
        for v in &report.variants {
            print!(" {:>9}", bench::report::format_db(v.aggregate_db[t]));
        }
        println!();
    }
    let files = emit_reports(report, out)?;
    eprintln!("wrote {} files to {}", files.len(), out.display());
    Ok(())
}

fn reconstruct_cmd(args: &ReconstructArgs) -> Result<()> {
    let variant: Variant = args.variant.parse()?;
    let options = args.data.options()?;
    let pools = args.data.pools()?;
    let dataset = args
        .data
        .sample(&pools, args.data.per_class_train, args.data.per_class_query)?;
    let item = dataset.query.get(args.image_index).ok_or_else(|| {
        Error::InvalidArgument(format!(
            "image index {} outside the {} query images",
            args.image_index,
            dataset.query.len()
        ))
    })?;
    let train: Vec<Image> = dataset.train.iter().map(|x| x.image.clone()).collect();
    let query = [item.image.clone()];
    let (centers, _) = reconstruct_centers(&train, &query, variant, &[args.d], &options)?;
    let (rows, cols) = (item.image.rows(), item.image.cols());
    let raster: Vec<f64> = (0..rows * cols).map(|j| centers[0][(0, j)]).collect();
    let recon = Image::from_raster(rows, cols, &raster)?;
    let score = bench::psnr(&item.image.raster(), &raster, bench::MAX_VALUE)?;

    std::fs::create_dir_all(&args.out).map_err(|e| Error::Io {
        path: args.out.clone(),
        source: e,
    })?;
    let original = args.out.join(format!("query{}_original.pgm", args.image_index));
    let rebuilt = args.out.join(format!(
        "query{}_{}_d{}.pgm",
        args.image_index,
        variant.name().to_ascii_lowercase(),
        args.d
    ));
    pgm::write_pgm(&original, &item.image)?;
    pgm::write_pgm(&rebuilt, &recon)?;
    println!(
        "label {} {variant} d={} PSNR {} dB",
        item.label,
        args.d,
        bench::report::format_db(score)
    );
    println!("{}\n{}", original.display(), rebuilt.display());
    Ok(())
}
