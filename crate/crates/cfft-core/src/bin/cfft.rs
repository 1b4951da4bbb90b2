//! Command-line front end: plan building, reduction, subexpression sharing,
//! complexity reports, decode trials and fixture verification.

use cfft::bilinear::{build_full_cfft, PlanVariant};
use cfft::cyclotomic::compute_cosets;
use cfft::report::{
    build_task_plan, cmd_decode, cmd_report, cmd_verify_fixture, plan_json, reduced_plan_json,
    Fixture, Pipeline, RunConfig, Task,
};
use cfft::slp::{cse_optimize, plan_to_slp, CseOptions};
use clap::{Parser, Subcommand, ValueEnum};
use std::io::Write;
use std::path::PathBuf;

#[derive(Parser)]
#[command(
    name = "cfft",
    version,
    about = "Cyclotomic FFT plans over GF(2^m) and Reed-Solomon decoders with operation accounting"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    Dcfft,
    Scfft,
}

impl From<VariantArg> for PlanVariant {
    fn from(v: VariantArg) -> PlanVariant {
        match v {
            VariantArg::Dcfft => PlanVariant::Dcfft,
            VariantArg::Scfft => PlanVariant::Scfft,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum TaskArg {
    Syndromes,
    Chien,
    ForneyA,
    TauEven,
    TauOddOpt1,
    TauOddOpt2,
    Full,
}

impl From<TaskArg> for Task {
    fn from(t: TaskArg) -> Task {
        match t {
            TaskArg::Syndromes => Task::Syndromes,
            TaskArg::Chien => Task::Chien,
            TaskArg::ForneyA => Task::ForneyA,
            TaskArg::TauEven => Task::TauEven,
            TaskArg::TauOddOpt1 => Task::TauOddOpt1,
            TaskArg::TauOddOpt2 => Task::TauOddOpt2,
            TaskArg::Full => Task::Full,
        }
    }
}

#[derive(clap::Args, Clone)]
struct CommonArgs {
    /// Extension degree of GF(2^m).
    #[arg(long, default_value_t = 8)]
    m: u32,
    /// Primitive polynomial bitmask (hex or decimal); default per degree.
    #[arg(long, value_parser = parse_poly)]
    prim_poly: Option<u32>,
    /// Code parameters as n,k.
    #[arg(long, value_parser = parse_code, default_value = "255,223")]
    code: (usize, usize),
    #[arg(long, default_value_t = 0x5EED)]
    seed: u64,
    /// Randomized restarts for the subexpression search (0 = deterministic).
    #[arg(long, default_value_t = 0)]
    cse_restarts: u32,
    /// Output path for JSON; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_poly(s: &str) -> Result<u32, String> {
    let s = s.trim();
    if let Some(hex) = s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        u32::from_str_radix(hex, 16).map_err(|e| e.to_string())
    } else {
        s.parse().map_err(|e: std::num::ParseIntError| e.to_string())
    }
}

fn parse_code(s: &str) -> Result<(usize, usize), String> {
    let (n, k) = s.split_once(',').ok_or("expected n,k")?;
    Ok((
        n.trim().parse().map_err(|e: std::num::ParseIntError| e.to_string())?,
        k.trim().parse().map_err(|e: std::num::ParseIntError| e.to_string())?,
    ))
}

#[derive(Subcommand)]
enum Command {
    /// Construct a full plan and emit its JSON container.
    Build {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, value_enum, default_value = "scfft")]
        variant: VariantArg,
    },
    /// Construct and reduce a plan for a task; emit the reduced container.
    Reduce {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, value_enum, default_value = "scfft")]
        variant: VariantArg,
        #[arg(long, value_enum, default_value = "syndromes")]
        task: TaskArg,
    },
    /// Run the subexpression search on a task's matrices; print counts.
    Cse {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, value_enum, default_value = "scfft")]
        variant: VariantArg,
        #[arg(long, value_enum, default_value = "syndromes")]
        task: TaskArg,
    },
    /// Complexity table for a task, annotated with published targets.
    Report {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, value_enum)]
        variant: Option<VariantArg>,
        #[arg(long, value_enum, default_value = "syndromes")]
        task: TaskArg,
        /// Emit JSON instead of the rendered table.
        #[arg(long)]
        json: bool,
    },
    /// Seeded decode trials through the selected pipeline.
    Decode {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        /// Errata budget 2*nu + mu per trial; defaults to n - k.
        #[arg(long)]
        max_weight: Option<usize>,
        /// Odd-half evaluation route: 1, 2 or auto.
        #[arg(long, default_value = "auto")]
        option: String,
        #[arg(long, value_enum, default_value = "both")]
        pipeline: PipelineArg,
    },
    /// Parse, count and execute the shipped syndrome fixture.
    VerifyFixture {
        #[command(flatten)]
        common: CommonArgs,
        /// Directory holding the fixture files; built-in copy when omitted.
        #[arg(long)]
        dir: Option<PathBuf>,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
    },
    /// Emit the shared-subexpression program for a task in the text grammar.
    EmitSlp {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, value_enum, default_value = "scfft")]
        variant: VariantArg,
        #[arg(long, value_enum, default_value = "syndromes")]
        task: TaskArg,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum PipelineArg {
    Time,
    Transform,
    Both,
}

fn write_out(out: &Option<PathBuf>, text: &str) -> std::io::Result<()> {
    match out {
        Some(p) => std::fs::write(p, text),
        None => {
            let mut so = std::io::stdout().lock();
            so.write_all(text.as_bytes())?;
            if !text.ends_with('\n') {
                so.write_all(b"\n")?;
            }
            Ok(())
        }
    }
}

fn run_config(common: &CommonArgs, task: Task, variant: Option<PlanVariant>) -> RunConfig {
    RunConfig {
        m: common.m,
        prim_poly: common.prim_poly,
        n: common.code.0,
        k: common.code.1,
        task,
        variant,
        option: None,
        trials: 0,
        seed: common.seed,
        cse_restarts: common.cse_restarts,
    }
}

fn check_extended(n: usize) -> Result<(), String> {
    if n > 255 && std::env::var("CFFT_EXTENDED").ok().as_deref() != Some("1") {
        return Err(format!("length {n} runs are gated; set CFFT_EXTENDED=1 to enable"));
    }
    Ok(())
}

fn main() {
    if let Err(e) = real_main() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}

fn real_main() -> Result<(), Box<dyn std::error::Error>> {
    let cli = Cli::parse();
    match cli.command {
        Command::Build { common, variant } => {
            check_extended(common.code.0)?;
            let cfg = run_config(&common, Task::Full, Some(variant.into()));
            let field = cfg.field()?;
            let cs = compute_cosets(field.n());
            let plan = build_full_cfft(&field, &cs, variant.into())?;
            write_out(&common.out, &serde_json::to_string_pretty(&plan_json(&plan))?)?;
        }
        Command::Reduce { common, variant, task } => {
            check_extended(common.code.0)?;
            let cfg = run_config(&common, task.into(), Some(variant.into()));
            let code = cfg.code()?;
            let rp = build_task_plan(&code.field, code.t, task.into(), variant.into())?;
            write_out(&common.out, &serde_json::to_string_pretty(&reduced_plan_json(&rp))?)?;
        }
        Command::Cse { common, variant, task } => {
            check_extended(common.code.0)?;
            let cfg = run_config(&common, task.into(), Some(variant.into()));
            let code = cfg.code()?;
            let rp = build_task_plan(&code.field, code.t, task.into(), variant.into())?;
            let opts = cfg.cse();
            let pre = cse_optimize(&rp.base.pre, &opts);
            let post = cse_optimize(&rp.base.post, &opts);
            let naive = |m: &cfft::bits::BitMatrix| -> usize {
                (0..m.rows()).map(|r| m.row_weight(r).saturating_sub(1)).sum()
            };
            let summary = serde_json::json!({
                "pre_naive_adds": naive(&rp.base.pre),
                "pre_shared_adds": pre.counts().adds,
                "post_naive_adds": naive(&rp.base.post),
                "post_shared_adds": post.counts().adds,
                "mults": rp.base.mult_count(),
            });
            write_out(&common.out, &serde_json::to_string_pretty(&summary)?)?;
        }
        Command::Report { common, variant, task, json } => {
            check_extended(common.code.0)?;
            let cfg = run_config(&common, task.into(), variant.map(Into::into));
            let rep = cmd_report(&cfg)?;
            if json {
                write_out(&common.out, &serde_json::to_string_pretty(&rep)?)?;
            } else {
                write_out(&common.out, &rep.render())?;
            }
        }
        Command::Decode { common, trials, max_weight, option, pipeline } => {
            check_extended(common.code.0)?;
            let mut cfg = run_config(&common, Task::Decode, None);
            cfg.trials = trials;
            cfg.option = match option.as_str() {
                "1" => Some(1),
                "2" => Some(2),
                _ => None,
            };
            let pl = match pipeline {
                PipelineArg::Time => Pipeline::TimeDomain,
                PipelineArg::Transform => Pipeline::TransformDomain,
                PipelineArg::Both => Pipeline::Both,
            };
            let weight = max_weight.unwrap_or(common.code.0 - common.code.1);
            let summary = cmd_decode(&cfg, pl, weight)?;
            write_out(&common.out, &serde_json::to_string_pretty(&summary)?)?;
        }
        Command::VerifyFixture { common, dir, trials } => {
            let fx = match dir {
                Some(d) => Fixture::from_dir(&d)?,
                None => Fixture::shipped()?,
            };
            let verdict = cmd_verify_fixture(&fx, trials, common.seed)?;
            write_out(&common.out, &serde_json::to_string_pretty(&verdict)?)?;
        }
        Command::EmitSlp { common, variant, task } => {
            check_extended(common.code.0)?;
            let cfg = run_config(&common, task.into(), Some(variant.into()));
            let code = cfg.code()?;
            let rp = build_task_plan(&code.field, code.t, task.into(), variant.into())?;
            let slp = plan_to_slp(&rp.base, &CseOptions::default());
            let constants: std::collections::BTreeMap<String, u32> = slp
                .constant_layer(&code.field)
                .into_iter()
                .map(|(dst, _, e)| (dst, e))
                .collect();
            let mut text = slp.emit_additions()?;
            text.push_str("# constants (slot -> alpha exponent)\n");
            text.push_str(&serde_json::to_string(&constants)?);
            text.push('\n');
            write_out(&common.out, &text)?;
        }
    }
    Ok(())
}
