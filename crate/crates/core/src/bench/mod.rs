//! Reconstruction benchmark on MNIST-style data: IDX loading, seeded
//! sampling, PSNR scoring of PCA and TPCA variants, and report rendering.

pub mod experiment;
pub mod idx;
pub mod pgm;
pub mod psnr;
pub mod report;
pub mod sample;
pub mod variant;

pub use experiment::{
    reconstruct_centers, run_experiment, run_variant, Engine, ExperimentOptions, PsnrReport,
    VariantReport,
};
pub use idx::{load_idx, parse_idx, LabeledImage};
pub use psnr::{psnr, MAX_VALUE};
pub use report::emit_reports;
pub use sample::{sample_dataset, sample_split, Dataset};
pub use variant::{parse_dims, Variant};
