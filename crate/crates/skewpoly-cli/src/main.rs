//! Command line front end: self tests against the naive oracles, file
//! based skew polynomial arithmetic, benchmark runs with CSV output, and a
//! Gabidulin code demo.
//!
//! Exit codes: 0 success, 1 mismatch or decoding failure, 2 usage error.

use std::collections::{HashMap, HashSet};
use std::process::ExitCode;

use rand::rngs::StdRng;
use rand::SeedableRng;

use skewpoly::error::Error;
use skewpoly::evalinterp::NormalBasisCtx;
use skewpoly::fastmult::{self, FastCtx};
use skewpoly::gabidulin::{self, DecodeOutcome, GabidulinCode};
use skewpoly::modmult;
use skewpoly::serial;
use skewpoly::skew::{self, SkewPoly};
use skewpoly::tower::Tower;

mod bench;
mod selftest;

const USAGE: &str = "usage: skewpoly <command> [options]

commands:
  selftest   run the oracle/property suites over a parameter grid
             [--seed N] [--trials N] [--p 2,3,5,7] [--r 1..8 | 1,2,3]
             [--max-deg N] [--json PATH] [--inject-fault]
             stdout: one JSON object per executed check; stderr: summary
  mul        multiply two skew polynomials from files or inline text
             --field SPEC --a POLY --b POLY
             [--mode naive|cyclic|crt|small|auto] [--seed N]
  bench      timing grid; CSV schema p,r,d,mode,nanos,crt_retries
             [--scenario profile|quick] [--csv PATH] [--seed N] [--reps N] [--parallel]
             [--p N] [--r N] [--d 16,32,64,128] [--modes naive,crt,auto]
  gabidulin  rank-metric codec
             encode --msg POLY [--out PATH]
             decode --received WORD [--out PATH]
             demo [--t N] [--trials N]
             common: [--field SPEC] [--n N] [--k N] [--seed N]

SPEC/POLY/WORD arguments are file paths, or inline when they contain '='
(fields) or start with '[' (values).";

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().skip(1).collect();
    match run(&argv) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            eprintln!("{USAGE}");
            ExitCode::from(2)
        }
    }
}

fn run(argv: &[String]) -> Result<ExitCode, String> {
    let Some(cmd) = argv.first() else {
        return Err("missing command".into());
    };
    match cmd.as_str() {
        "selftest" => cmd_selftest(&argv[1..]),
        "mul" => cmd_mul(&argv[1..]),
        "bench" => cmd_bench(&argv[1..]),
        "gabidulin" => cmd_gabidulin(&argv[1..]),
        other => Err(format!("unknown command '{other}'")),
    }
}

/// Minimal flag parser: `--name value` pairs plus boolean switches.
/// Stray positional arguments are usage errors.
pub struct Args {
    flags: HashMap<String, String>,
    switches: HashSet<String>,
}

impl Args {
    pub fn parse(argv: &[String], bool_flags: &[&str]) -> Result<Args, String> {
        let mut flags = HashMap::new();
        let mut switches = HashSet::new();
        let mut it = argv.iter();
        while let Some(arg) = it.next() {
            if let Some(name) = arg.strip_prefix("--") {
                if bool_flags.contains(&name) {
                    switches.insert(name.to_string());
                } else {
                    let value =
                        it.next().ok_or_else(|| format!("flag --{name} needs a value"))?;
                    flags.insert(name.to_string(), value.clone());
                }
            } else {
                return Err(format!("unexpected argument '{arg}'"));
            }
        }
        Ok(Args { flags, switches })
    }

    pub fn get(&self, name: &str) -> Option<&str> {
        self.flags.get(name).map(|s| s.as_str())
    }

    pub fn get_u64(&self, name: &str, default: u64) -> Result<u64, String> {
        match self.get(name) {
            None => Ok(default),
            Some(v) => {
                v.parse().map_err(|_| format!("--{name} expects an integer, got '{v}'"))
            }
        }
    }

    pub fn get_usize(&self, name: &str, default: usize) -> Result<usize, String> {
        Ok(self.get_u64(name, default as u64)? as usize)
    }

    pub fn has(&self, name: &str) -> bool {
        self.switches.contains(name)
    }

    /// Comma list or `a..b` range of integers.
    pub fn get_list(&self, name: &str, default: &[usize]) -> Result<Vec<usize>, String> {
        match self.get(name) {
            None => Ok(default.to_vec()),
            Some(v) => {
                if let Some((lo, hi)) = v.split_once("..") {
                    let lo: usize =
                        lo.parse().map_err(|_| format!("bad range start in --{name}"))?;
                    let hi: usize =
                        hi.parse().map_err(|_| format!("bad range end in --{name}"))?;
                    Ok((lo..=hi).collect())
                } else {
                    v.split(',')
                        .map(|s| {
                            s.trim()
                                .parse()
                                .map_err(|_| format!("bad integer '{s}' in --{name}"))
                        })
                        .collect()
                }
            }
        }
    }
}

/// File path or inline text (inline when it contains '=' or starts with '[').
fn load_input(arg: &str) -> Result<String, String> {
    if arg.contains('=') || arg.trim_start().starts_with('[') {
        Ok(arg.to_string())
    } else {
        std::fs::read_to_string(arg).map_err(|e| format!("cannot read '{arg}': {e}"))
    }
}

fn build_tower(field_arg: &str, seed: u64) -> Result<Tower, String> {
    let text = load_input(field_arg)?;
    let (p, f) =
        serial::parse_field_desc(text.trim()).map_err(|e| format!("field description: {e}"))?;
    let mut rng = StdRng::seed_from_u64(seed);
    Tower::new(p, &f, &mut rng).map_err(|e| format!("field construction: {e}"))
}

fn cmd_selftest(argv: &[String]) -> Result<ExitCode, String> {
    let args = Args::parse(argv, &["inject-fault"])?;
    let opts = selftest::Options {
        seed: args.get_u64("seed", 42)?,
        trials: args.get_usize("trials", 6)?,
        ps: args.get_list("p", &[2, 3, 5, 7])?.into_iter().map(|v| v as u64).collect(),
        rs: args.get_list("r", &[1, 2, 3, 4, 5, 6, 7, 8])?,
        max_deg: args.get_usize("max-deg", 64)?,
        json_path: args.get("json").map(|s| s.to_string()),
        inject_fault: args.has("inject-fault"),
    };
    let report = selftest::run(&opts).map_err(|e| e.to_string())?;
    eprintln!(
        "selftest: {} checks, {} mismatches (seed {})",
        report.checks, report.mismatches, opts.seed
    );
    Ok(if report.mismatches == 0 { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn cmd_mul(argv: &[String]) -> Result<ExitCode, String> {
    let args = Args::parse(argv, &[])?;
    let field = args.get("field").ok_or("--field is required")?;
    let seed = args.get_u64("seed", 0)?;
    let t = build_tower(field, seed)?;
    let parse = |name: &str| -> Result<SkewPoly, String> {
        let arg = args.get(name).ok_or(format!("--{name} is required"))?;
        let text = load_input(arg)?;
        serial::parse_poly(text.trim(), &t).map_err(|e| format!("--{name}: {e}"))
    };
    let a = parse("a")?;
    let b = parse("b")?;
    let mode = args.get("mode").unwrap_or("auto");
    let mut rng = StdRng::seed_from_u64(seed ^ 0x6d756c);
    let product = match mode {
        "naive" => skew::mul_naive(&t, &a, &b),
        "cyclic" => {
            let ctx = NormalBasisCtx::new(&t).map_err(|e| e.to_string())?;
            modmult::mod_mul_cyclic(&t, &ctx, &a, &b)
        }
        "crt" => fastmult::mult_crt(&t, &a, &b, &mut rng),
        "small" => {
            let ctx = NormalBasisCtx::new(&t).map_err(|e| e.to_string())?;
            fastmult::mult_small_degree(&t, &ctx, &a, &b).map_err(|e| match e {
                Error::DegreeTooLarge { got, bound } => {
                    format!("mode=small needs deg a + deg b <= {bound}, got {got}")
                }
                other => other.to_string(),
            })?
        }
        "auto" => {
            let ctx = FastCtx::new(&t).map_err(|e| e.to_string())?;
            fastmult::multiply(&t, &ctx, &a, &b, &mut rng)
        }
        other => return Err(format!("unknown mode '{other}'")),
    };
    println!("{}", serial::print_poly(&t, &product));
    Ok(ExitCode::SUCCESS)
}

fn cmd_bench(argv: &[String]) -> Result<ExitCode, String> {
    let args = Args::parse(argv, &["parallel"])?;
    let scenario = args.get("scenario").unwrap_or("profile");
    let (def_p, def_r, def_d): (u64, usize, Vec<usize>) = match scenario {
        "profile" => (2, 16, vec![16, 32, 64, 128]),
        "quick" => (2, 8, vec![8, 16, 32]),
        other => return Err(format!("unknown scenario '{other}'")),
    };
    let modes: Vec<String> = match args.get("modes") {
        None => vec!["naive".into(), "crt".into(), "auto".into()],
        Some(v) => v.split(',').map(|s| s.trim().to_string()).collect(),
    };
    let opts = bench::Options {
        p: args.get_u64("p", def_p)?,
        r: args.get_usize("r", def_r)?,
        ds: args.get_list("d", &def_d)?,
        modes,
        reps: args.get_usize("reps", 5)?,
        seed: args.get_u64("seed", 7)?,
        csv_path: args.get("csv").unwrap_or("bench.csv").to_string(),
        parallel: args.has("parallel"),
    };
    bench::run(&opts)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_gabidulin(argv: &[String]) -> Result<ExitCode, String> {
    let Some(sub) = argv.first() else {
        return Err("gabidulin needs a subcommand: encode, decode or demo".into());
    };
    let args = Args::parse(&argv[1..], &[])?;
    let field = args.get("field").unwrap_or("p=2;f=1,1,0,1,1,0,0,0,1");
    let seed = args.get_u64("seed", 1)?;
    let n = args.get_usize("n", 8)?;
    let k = args.get_usize("k", 4)?;
    let t = build_tower(field, seed)?;
    if n > t.r() {
        return Err(format!("code length {n} exceeds the extension degree {}", t.r()));
    }
    let points = t.normal_basis()[..n].to_vec();
    let code = GabidulinCode::new(&t, points, k).map_err(|e| e.to_string())?;
    let ctx = FastCtx::new(&t).map_err(|e| e.to_string())?;
    let mut rng = StdRng::seed_from_u64(seed ^ 0x676162);
    let write_out = |text: String| -> Result<(), String> {
        match args.get("out") {
            Some(path) => std::fs::write(path, text + "\n").map_err(|e| e.to_string()),
            None => {
                println!("{text}");
                Ok(())
            }
        }
    };
    match sub.as_str() {
        "encode" => {
            let arg = args.get("msg").ok_or("--msg is required")?;
            let text = load_input(arg)?;
            let msg = serial::parse_poly(text.trim(), &t).map_err(|e| format!("--msg: {e}"))?;
            let cw = gabidulin::encode(&t, &ctx, &code, &msg, &mut rng).map_err(|e| match e {
                Error::DegreeTooLarge { got, bound } => {
                    format!("message degree {got} exceeds k-1 = {bound}")
                }
                other => other.to_string(),
            })?;
            write_out(serial::print_word(&t, &cw))?;
            Ok(ExitCode::SUCCESS)
        }
        "decode" => {
            let arg = args.get("received").ok_or("--received is required")?;
            let text = load_input(arg)?;
            let word = serial::parse_word(text.trim(), &t, Some(n))
                .map_err(|e| format!("--received: {e}"))?;
            match gabidulin::decode(&t, &ctx, &code, &word, &mut rng)
                .map_err(|e| e.to_string())?
            {
                DecodeOutcome::Message(msg) => {
                    write_out(serial::print_poly(&t, &msg))?;
                    Ok(ExitCode::SUCCESS)
                }
                DecodeOutcome::Failure => {
                    write_out("FAILURE".to_string())?;
                    Ok(ExitCode::from(1))
                }
            }
        }
        "demo" => {
            let rank = args.get_usize("t", 2)?;
            let trials = args.get_usize("trials", 100)?;
            let mut decoded = 0usize;
            let mut wrong = 0usize;
            for _ in 0..trials {
                let msg = skew::rand_skew_upto(&t, k - 1, &mut rng);
                let cw = gabidulin::encode(&t, &ctx, &code, &msg, &mut rng)
                    .map_err(|e| e.to_string())?;
                let err = gabidulin::plant_error(&t, &code, rank, &mut rng);
                let received: Vec<_> =
                    cw.iter().zip(&err).map(|(c, e)| t.add_elems(c, e)).collect();
                match gabidulin::decode(&t, &ctx, &code, &received, &mut rng)
                    .map_err(|e| e.to_string())?
                {
                    DecodeOutcome::Message(m) if m == msg => decoded += 1,
                    DecodeOutcome::Message(m) => {
                        // acceptable only as a codeword within the radius
                        let cw2 = gabidulin::encode(&t, &ctx, &code, &m, &mut rng)
                            .map_err(|e| e.to_string())?;
                        let resid: Vec<_> = cw2
                            .iter()
                            .zip(&received)
                            .map(|(c, r)| t.sub_elems(r, c))
                            .collect();
                        if gabidulin::rank_of_word(&t, &resid) > code.t_max() {
                            wrong += 1;
                        }
                    }
                    DecodeOutcome::Failure => {}
                }
            }
            println!("{decoded}/{trials} decoded (rank-{rank} errors, n={n} k={k})");
            if wrong > 0 {
                eprintln!("{wrong} silent wrong answers: decoder bug");
                return Ok(ExitCode::from(1));
            }
            Ok(ExitCode::SUCCESS)
        }
        other => Err(format!("unknown gabidulin subcommand '{other}'")),
    }
}
