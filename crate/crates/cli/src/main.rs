//! `corrdyn`: reproducible experiments on the correspondences
//! `(w - c)^q = z^p`.
//!
//! Exit codes: 0 success, 1 invariant failure, 2 usage error, 3 numeric
//! failure.

/// `println!` that exits quietly when standard output has been closed,
/// as with `corrdyn cycles | head`.
#[macro_export]
macro_rules! say {
    ($($arg:tt)*) => {{
        use std::io::Write;
        if let Err(e) = writeln!(std::io::stdout().lock(), $($arg)*) {
            if e.kind() == std::io::ErrorKind::BrokenPipe {
                std::process::exit(0);
            }
            panic!("writing to standard output: {e}");
        }
    }};
}

mod cache;
mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use corrdyn::Complex64;

#[derive(Parser, Debug)]
#[command(name = "corrdyn", version, about = "Dynamics of the correspondences (w - c)^q = z^p")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Options shared by every subcommand.
#[derive(Args, Debug, Clone)]
pub struct Common {
    #[arg(long, default_value_t = 6)]
    pub p: u32,
    #[arg(long, default_value_t = 2)]
    pub q: u32,
    /// Parameter as a+bi, no spaces.
    #[arg(long, default_value = "0+0i", value_parser = parse_complex, allow_hyphen_values = true)]
    pub c: Complex64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads; 0 means all cores.
    #[arg(long, env = "CORRDYN_THREADS")]
    pub threads: Option<usize>,
    /// File of key = value lines naming flags of this subcommand.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Survival raster of the Julia set, written as PGM or PPM.
    RenderJulia(commands::RenderArgs),
    /// Julia set samples by random backward iteration, as CSV.
    SampleJulia(commands::SampleArgs),
    /// Dual Julia set samples by the forward chaos game, plus attracting cycles.
    DualJulia(commands::DualArgs),
    /// Annulus bounds r_c, R_c and s_c.
    Bounds(commands::BoundsArgs),
    /// Periodic cycles from the circle census, continued to c.
    Cycles(commands::CyclesArgs),
    /// Solid-torus iterates or symbolic points of the solenoid.
    Solenoid(commands::SolenoidArgs),
    /// Samples of the moved curve through an address, as CSV.
    Curve(commands::CurveArgs),
    /// Holomorphy, Lipschitz, conjugacy and dilatation diagnostics of the motion.
    MotionCheck(commands::MotionArgs),
    /// Runs the full invariant suite; exit 0 iff every check passes.
    Verify(commands::VerifyArgs),
}

/// `a+bi`, `a-bi`, `a`, `bi`; exponents such as `1e-3+2e-4i` are allowed.
pub fn parse_complex(s: &str) -> Result<Complex64, String> {
    let bad = || format!("expected a complex number like 0+0.2i, got {s:?}");
    if s.is_empty() || s.contains(char::is_whitespace) {
        return Err(bad());
    }
    let Some(body) = s.strip_suffix('i') else {
        return s.parse::<f64>().map(|re| Complex64::new(re, 0.0)).map_err(|_| bad());
    };
    // the sign that separates the parts is not leading and not an exponent sign
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let imag = |t: &str| match t {
        "" | "+" => Ok(1.0),
        "-" => Ok(-1.0),
        _ => t.parse::<f64>().map_err(|_| bad()),
    };
    match split {
        Some(k) => Ok(Complex64::new(body[..k].parse().map_err(|_| bad())?, imag(&body[k..])?)),
        None => Ok(Complex64::new(0.0, imag(body)?)),
    }
}

fn setup_threads(common: &Common) {
    let n = common.threads.unwrap_or(0);
    // a second initialisation only happens in tests; the first pool wins
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
}

fn main() -> ExitCode {
    let argv = match config::merge_config(std::env::args().collect()) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match &cli.command {
        Command::RenderJulia(a) => commands::render_julia(a),
        Command::SampleJulia(a) => commands::sample_julia(a),
        Command::DualJulia(a) => commands::dual_julia(a),
        Command::Bounds(a) => commands::bounds(a),
        Command::Cycles(a) => commands::cycles(a),
        Command::Solenoid(a) => commands::solenoid(a),
        Command::Curve(a) => commands::curve(a),
        Command::MotionCheck(a) => commands::motion_check(a),
        Command::Verify(a) => commands::verify(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_formats() {
        assert_eq!(parse_complex("0+0.2i").unwrap(), Complex64::new(0.0, 0.2));
        assert_eq!(parse_complex("-1").unwrap(), Complex64::new(-1.0, 0.0));
        assert_eq!(parse_complex("-1-2i").unwrap(), Complex64::new(-1.0, -2.0));
        assert_eq!(parse_complex("0.35i").unwrap(), Complex64::new(0.0, 0.35));
        assert_eq!(parse_complex("-i").unwrap(), Complex64::new(0.0, -1.0));
        assert_eq!(parse_complex("1e-3+2e-4i").unwrap(), Complex64::new(1e-3, 2e-4));
        assert_eq!(parse_complex("1e-3-2E-4i").unwrap(), Complex64::new(1e-3, -2e-4));
        for bad in ["", "0 + 0.2i", "0+0.2j", "x", "1+i2", "i+1"] {
            assert!(parse_complex(bad).is_err(), "{bad}");
        }
    }
}
