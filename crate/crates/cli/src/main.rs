use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use rayon::prelude::*;

use holofocus::autofocus::{autofocus_pipeline, reconstruct_stack};
use holofocus::calibration::find_constrained_intensity;
use holofocus::evaluate::{evaluate, Matching, MatchTolerances};
use holofocus::io::{
    read_detections, read_hologram, read_particles, write_detections, write_hologram, write_particles,
    write_sidecar, write_stack, ConfigFile, Provenance,
};
use holofocus::propagation::synthesize_hologram;
use holofocus::resolution::resolution_report;
use holofocus::simulator::sample_field;

#[derive(Parser)]
#[command(name = "holofocus", version, about = "In-line hologram simulation and multi-particle autofocusing")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample a particle field and write hologram.png, truth.csv and truth.json.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Also write a lossless hologram.raw.
        #[arg(long)]
        raw: bool,
    },
    /// Back-propagate a hologram over the configured range and write the slices.
    Reconstruct {
        #[arg(long)]
        holo: PathBuf,
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print the calibrated fixed_intensity for a hologram.
    Calibrate {
        #[arg(long)]
        holo: PathBuf,
        #[arg(long)]
        config: PathBuf,
    },
    /// Run the full pipeline. With a directory as --holo, every .png/.raw/.f32
    /// inside is processed and --out is a directory of CSV files.
    Detect {
        #[arg(long)]
        holo: PathBuf,
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Compare detections with ground truth.
    Evaluate {
        #[arg(long)]
        truth: PathBuf,
        #[arg(long)]
        pred: PathBuf,
        /// Supplies the pixel pitch and axial resolution for the default gates.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Lateral gate in metres (default 6 px).
        #[arg(long)]
        lateral_m: Option<f64>,
        /// Axial gate in metres (default one axial-resolution cell at dis1).
        #[arg(long)]
        axial_m: Option<f64>,
        /// Depth error bound for the reported accuracy fraction, metres.
        #[arg(long, default_value_t = 1e-4)]
        axial_check_m: f64,
        /// Maximum-cardinality assignment instead of greedy nearest neighbour.
        #[arg(long)]
        optimal: bool,
        /// Print the full report as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Print numerical apertures and resolution limits at a distance.
    Resolution {
        #[arg(long)]
        config: PathBuf,
        /// Distance from the sensor in millimetres.
        #[arg(long)]
        z: f64,
    },
}

fn load(path: &Path) -> Result<ConfigFile> {
    ConfigFile::load(path).with_context(|| format!("reading config {}", path.display()))
}

fn simulate(config: &Path, out: &Path, raw: bool) -> Result<()> {
    let file = load(config)?;
    let optical = file.optical()?;
    let field = sample_field(&file.sampling_spec()?)?;
    let holo = synthesize_hologram(&field, &optical, file.noise_level)?;
    std::fs::create_dir_all(out)?;
    write_hologram(out.join("hologram.png"), &holo)?;
    if raw {
        write_hologram(out.join("hologram.raw"), &holo)?;
    }
    let truth = out.join("truth.csv");
    write_particles(&truth, field.particles())?;
    let mut prov = Provenance::new(file.hash()?, field.seed());
    prov.volume = Some(*field.volume());
    write_sidecar(&truth, &prov)?;
    println!("{} particles -> {}", field.len(), out.display());
    Ok(())
}

fn reconstruct(holo: &Path, config: &Path, out: &Path) -> Result<()> {
    let file = load(config)?;
    let optical = file.optical()?;
    let frame = read_hologram(holo, optical.pixel_pitch)?;
    let stack = reconstruct_stack(&frame, &optical, file.detector()?.source)?;
    write_stack(out, &stack, optical.pixel_pitch)?;
    println!("{} slices -> {}", stack.len(), out.display());
    Ok(())
}

fn calibrate(holo: &Path, config: &Path) -> Result<()> {
    let file = load(config)?;
    let optical = file.optical()?;
    let frame = read_hologram(holo, optical.pixel_pitch)?;
    let stack = reconstruct_stack(&frame, &optical, file.detector()?.source)?;
    println!("fixed_intensity = {}", find_constrained_intensity(&stack, &file.calibration()?)?);
    Ok(())
}

fn is_hologram(path: &Path) -> bool {
    path.is_file()
        && matches!(
            path.extension().and_then(|e| e.to_str()).map(str::to_ascii_lowercase).as_deref(),
            Some("png" | "raw" | "f32")
        )
}

fn detect_one(holo: &Path, file: &ConfigFile, out: &Path) -> Result<usize> {
    let optical = file.optical()?;
    let frame = read_hologram(holo, optical.pixel_pitch).with_context(|| format!("reading {}", holo.display()))?;
    let outcome = autofocus_pipeline(&frame, &optical, &file.detector()?)?;
    write_detections(out, &outcome.detections)?;
    write_sidecar(out, &Provenance::new(file.hash()?, file.seed))?;
    Ok(outcome.detections.len())
}

fn detect(holo: &Path, config: &Path, out: &Path) -> Result<()> {
    let file = load(config)?;
    if !holo.is_dir() {
        let n = detect_one(holo, &file, out)?;
        println!("{n} particles -> {}", out.display());
        return Ok(());
    }
    let mut inputs: Vec<PathBuf> = std::fs::read_dir(holo)?
        .map(|e| e.map(|e| e.path()))
        .collect::<std::io::Result<_>>()?;
    inputs.retain(|p| is_hologram(p));
    inputs.sort();
    if inputs.is_empty() {
        bail!("no .png, .raw or .f32 holograms in {}", holo.display());
    }
    std::fs::create_dir_all(out)?;
    let results: Vec<Result<usize>> = inputs
        .par_iter()
        .map(|p| {
            let stem = p.file_stem().and_then(|s| s.to_str()).unwrap_or("hologram");
            detect_one(p, &file, &out.join(format!("{stem}.csv")))
        })
        .collect();
    let mut total = 0;
    for (p, r) in inputs.iter().zip(results) {
        let n = r?;
        println!("{}: {n}", p.display());
        total += n;
    }
    println!("{total} particles in {} holograms -> {}", inputs.len(), out.display());
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn evaluate_cmd(
    truth: &Path,
    pred: &Path,
    config: Option<&Path>,
    lateral: Option<f64>,
    axial: Option<f64>,
    axial_check: f64,
    optimal: bool,
    json: bool,
) -> Result<()> {
    let file = match config {
        Some(p) => load(p)?,
        None => ConfigFile::default(),
    };
    let mut tol = MatchTolerances::for_config(&file.optical()?)?;
    if let Some(l) = lateral {
        tol.lateral = l;
    }
    if let Some(a) = axial {
        tol.axial = a;
    }
    if optimal {
        tol = tol.with_matching(Matching::Optimal);
    }
    let truth = read_particles(truth)?;
    let detections = read_detections(pred)?;
    let report = evaluate(&truth, &detections, &tol)?;
    if json {
        println!("{}", serde_json::to_string_pretty(&report)?);
        return Ok(());
    }
    println!("truth_count        {}", report.truth_count);
    println!("detected_count     {}", report.detected_count);
    println!("deviation          {}", report.deviation);
    println!("relative_error_pct {:.2}", report.relative_error_pct);
    println!("matched            {}/{}", report.matched_count(), report.truth_count);
    if !report.axial_errors.is_empty() {
        let worst = report.axial_errors.iter().fold(0.0f64, |m, e| m.max(e.abs()));
        println!("max_axial_error_mm {:.4}", worst * 1e3);
        println!(
            "within_{:.3}_mm      {:.1}%",
            axial_check * 1e3,
            100.0 * report.axial_fraction_within(axial_check)
        );
    }
    Ok(())
}

fn resolution(config: &Path, z_mm: f64) -> Result<()> {
    let file = load(config)?;
    let r = resolution_report(&file.optical()?, z_mm * 1e-3)?;
    println!("z_mm            {}", r.z * 1e3);
    println!("na_holo         {:.6}", r.na_holo);
    println!("na_sensor       {:.6}", r.na_sensor);
    println!("na_dhs          {:.6}", r.na_dhs);
    println!("lateral_res_um  {:.3}", r.lateral_res * 1e6);
    println!("axial_res_mm    {:.4}", r.axial_res * 1e3);
    println!("axial_slice_num {}", r.axial_slice_num);
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Simulate { config, out, raw } => simulate(&config, &out, raw),
        Command::Reconstruct { holo, config, out } => reconstruct(&holo, &config, &out),
        Command::Calibrate { holo, config } => calibrate(&holo, &config),
        Command::Detect { holo, config, out } => detect(&holo, &config, &out),
        Command::Evaluate { truth, pred, config, lateral_m, axial_m, axial_check_m, optimal, json } => evaluate_cmd(
            &truth,
            &pred,
            config.as_deref(),
            lateral_m,
            axial_m,
            axial_check_m,
            optimal,
            json,
        ),
        Command::Resolution { config, z } => resolution(&config, z),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
