mod common;

use common::*;
use talgebra::bench::experiment::{pca_centers, tpca_centers};
use talgebra::bench::report::{per_image_csv, psnr_table_csv};
use talgebra::bench::{
    emit_reports, load_idx, parse_idx, psnr, run_experiment, sample_dataset, Dataset, Engine,
    ExperimentOptions, LabeledImage, Variant, MAX_VALUE,
};
use talgebra::bench::idx::encode_idx;
use talgebra::compound::{Image, Strategy};
use talgebra::{Error, Parallelism, Precision};

fn pool(seed: u64, per_class: usize, classes: u8, size: usize) -> Vec<LabeledImage> {
    let mut r = rng(seed);
    (0..per_class * classes as usize)
        .map(|i| LabeledImage {
            image: random_image(&mut r, size, size),
            label: (i % classes as usize) as u8,
        })
        .collect()
}

#[test]
fn psnr_examples() {
    assert_eq!(psnr(&[7.0, 1.0], &[7.0, 1.0], MAX_VALUE).unwrap(), f64::INFINITY);
    assert_eq!(psnr(&[255.0; 4], &[0.0; 4], MAX_VALUE).unwrap(), 0.0);
    assert_eq!(psnr(&[255.0], &[229.5], MAX_VALUE).unwrap(), 20.0);
    assert!(matches!(psnr(&[1.0], &[], MAX_VALUE), Err(Error::InvalidArgument(_))));
}

#[test]
fn idx_files_round_trip_through_disk() {
    let items = pool(1, 3, 2, 4);
    let (img, lab) = encode_idx(&items).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let (ip, lp) = (dir.path().join("img.idx"), dir.path().join("lab.idx.gz"));
    std::fs::write(&ip, &img).unwrap();
    let mut gz = flate2::write::GzEncoder::new(Vec::new(), flate2::Compression::default());
    std::io::Write::write_all(&mut gz, &lab).unwrap();
    std::fs::write(&lp, gz.finish().unwrap()).unwrap();
    assert_eq!(load_idx(&ip, &lp).unwrap(), items);
    assert!(matches!(load_idx(&lp, &lp).unwrap_err().root(), Error::Format { offset: 0, .. }));
    assert!(matches!(load_idx(&dir.path().join("missing"), &lp), Err(Error::Io { .. })));
    assert_eq!(parse_idx(&img, &lab).unwrap(), items);
}

#[test]
fn sampling_counts() {
    let all = pool(2, 75, 10, 2);
    let d = sample_dataset(&all, 7, 60, 10).unwrap();
    assert_eq!((d.train.len(), d.query.len()), (600, 100));
    assert!(sample_dataset(&all, 7, 70, 10).is_err());
}

fn small_dataset() -> Dataset {
    sample_dataset(&pool(3, 14, 3, 6), 0, 10, 4).unwrap()
}

#[test]
fn report_invariants() {
    let ds = small_dataset();
    let dims = [4, 12, 36];
    let variants = [Variant::Pca, Variant::Tpca, Variant::TpcaX];
    let report = run_experiment(&ds, &variants, &dims, &ExperimentOptions::default()).unwrap();

    // Aggregate PSNR from the stacked arrays equals the per-image sum.
    for v in &report.variants {
        for (t, &d) in dims.iter().enumerate() {
            let total: f64 = v.squared_errors[t].iter().sum();
            if total == 0.0 {
                continue;
            }
            let direct = 20.0 * (MAX_VALUE * ((36 * 12) as f64).sqrt() / total.sqrt()).log10();
            if v.aggregate_db[t].is_infinite() {
                assert!(direct >= 240.0, "{} d={d}", v.variant);
            } else {
                assert!((direct - v.aggregate_db[t]).abs() < 1e-9, "{} d={d}", v.variant);
            }
        }
    }
    assert!(report.variant(Variant::Pca).unwrap().per_image_db[2].iter().all(|p| p.is_infinite()));

    let table = psnr_table_csv(&report);
    assert_eq!(table.lines().count(), 1 + variants.len() * dims.len());
    assert!(table.starts_with("variant,d,psnr_db\n"));
    let per = per_image_csv(&report, 1);
    assert!(per.starts_with("sorted_rank,image_id,PCA,TPCA,TPCA-X\n"));
    let pca: Vec<f64> = per.lines().skip(1).map(|l| l.split(',').nth(2).unwrap().parse().unwrap()).collect();
    assert!(pca.windows(2).all(|w| w[0] <= w[1]));

    let dir = tempfile::tempdir().unwrap();
    let files = emit_reports(&report, dir.path()).unwrap();
    assert_eq!(files.len(), 2 + 2 * dims.len());
    let first: Vec<Vec<u8>> = files.iter().map(|f| std::fs::read(f).unwrap()).collect();
    emit_reports(&report, dir.path()).unwrap();
    let second: Vec<Vec<u8>> = files.iter().map(|f| std::fs::read(f).unwrap()).collect();
    assert_eq!(first, second);
    let svg = String::from_utf8(first[1].clone()).unwrap();
    assert!(svg.starts_with("<svg") && svg.contains("dB</text>"));
}

#[test]
fn parallelism_and_engine_do_not_change_scores() {
    let ds = small_dataset();
    let dims = [3, 9, 20];
    let base = ExperimentOptions::default();
    let a = run_experiment(&ds, &[Variant::TpcaA], &dims, &base).unwrap();
    let b = run_experiment(
        &ds,
        &[Variant::TpcaA],
        &dims,
        &ExperimentOptions { parallelism: Parallelism::new(3).unwrap(), engine: Engine::Materialized, ..base },
    )
    .unwrap();
    let c = run_experiment(&ds, &[Variant::TpcaA], &dims, &ExperimentOptions { parallelism: Parallelism::new(2).unwrap(), ..base }).unwrap();
    for t in 0..dims.len() {
        assert!((a.variants[0].aggregate_db[t] - b.variants[0].aggregate_db[t]).abs() < 1e-6);
    }
    assert_eq!(psnr_table_csv(&a), psnr_table_csv(&c));
}

#[test]
fn trivial_shape_tensorial_path_matches_pca_in_db() {
    let ds = small_dataset();
    let train: Vec<Image> = ds.train.iter().map(|x| x.image.clone()).collect();
    let query: Vec<Image> = ds.query.iter().map(|x| x.image.clone()).collect();
    let dims = [1, 5, 17, 29];
    let a = pca_centers(&train, &query, &dims).unwrap();
    for engine in [Engine::Streaming, Engine::Materialized] {
        let b = tpca_centers(&train, &query, Strategy::Plain, &dims, Precision::C128, Parallelism::sequential(), engine).unwrap();
        for (x, y) in a.iter().zip(&b) {
            let target: Vec<f64> = query.iter().flat_map(|q| q.raster()).collect();
            let flat = |m: &faer::Mat<f64>| (0..m.nrows()).flat_map(|i| (0..m.ncols()).map(move |j| m[(i, j)])).collect::<Vec<_>>();
            let pa = psnr(&target, &flat(x), MAX_VALUE).unwrap();
            let pb = psnr(&target, &flat(y), MAX_VALUE).unwrap();
            assert!((pa - pb).abs() < 1e-6);
        }
    }
}

#[test]
fn low_precision_is_close() {
    let ds = small_dataset();
    let dims = [10];
    let hi = run_experiment(&ds, &[Variant::TpcaY], &dims, &ExperimentOptions::default()).unwrap();
    let lo = run_experiment(
        &ds,
        &[Variant::TpcaY],
        &dims,
        &ExperimentOptions { precision: Some(Precision::C64), ..Default::default() },
    )
    .unwrap();
    assert!((hi.variants[0].aggregate_db[0] - lo.variants[0].aggregate_db[0]).abs() < 1e-3);
    assert_eq!(lo.variants[0].precision, Precision::C64);
}
