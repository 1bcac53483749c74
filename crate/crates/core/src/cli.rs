//! The `polyzero` command line.
//!
//! Exit status: 0 on success, 1 on domain errors (no dominant coefficient,
//! finiteness not established, failed certification), 2 on usage errors and
//! malformed input.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde_json::json;

use crate::bounds;
use crate::error::{Error, Result};
use crate::extremal;
use crate::format::{fmt_num, parse_inline, read_poly, write_poly, write_poly_string};
use crate::poly::PolyPoly;
use crate::render::{self, Premap, Window};
use crate::rootfind::{self, NewtonOptions, ZeroCensus};
use crate::winding::{self, Curve};
use crate::zerotheory::{self, FinitenessCertificate, ZeroCount};

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "polyzero", version, about = "Zeros of polyanalytic polynomials")]
struct Cli {
    /// Worker threads for parallel stages (default: all cores).
    #[arg(long, global = true, value_name = "N")]
    threads: Option<usize>,
    /// Print diagnostics to stderr.
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Input {
    /// Polynomial file (`j k re im` per line).
    #[arg(value_name = "FILE", required_unless_present = "poly")]
    path: Option<PathBuf>,
    /// Inline polynomial, lines separated by `;`.
    #[arg(long, value_name = "TERMS", conflicts_with = "path")]
    poly: Option<String>,
}

impl Input {
    fn load(&self) -> Result<PolyPoly> {
        match (&self.path, &self.poly) {
            (_, Some(s)) => parse_inline(s),
            (Some(p), None) => read_poly(p),
            (None, None) => Err(Error::InvalidArgument("no polynomial given".into())),
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Existence, finiteness and the maximal zero count.
    Analyze {
        #[command(flatten)]
        input: Input,
        /// Assert that the polynomial is irreducible.
        #[arg(long)]
        irreducible: bool,
        #[arg(long)]
        json: bool,
    },
    /// Inclusion radii r0 <= r1, r0 < r2.
    Bounds {
        #[command(flatten)]
        input: Input,
    },
    /// Winding number along a circle or the boundary of an annulus.
    Wind {
        #[command(flatten)]
        input: Input,
        #[arg(long, num_args = 2, value_names = ["RE", "IM"], allow_negative_numbers = true)]
        center: Option<Vec<f64>>,
        #[arg(long, required_unless_present = "annulus", conflicts_with = "annulus")]
        radius: Option<f64>,
        #[arg(long, num_args = 2, value_names = ["R1", "R2"])]
        annulus: Option<Vec<f64>>,
    },
    /// Zero census in a disk as CSV.
    Roots {
        #[command(flatten)]
        input: Input,
        /// Disk radius (default 1.25 r0 + 0.25).
        #[arg(long)]
        radius: Option<f64>,
        /// Seed grid spacing (default radius / (4 deg)).
        #[arg(long)]
        spacing: Option<f64>,
        /// Extra Newton seeds, `re im` per line.
        #[arg(long, value_name = "FILE")]
        seeds_file: Option<PathBuf>,
    },
    /// Extremal polynomial with n² zeros: schedule, census, residual.
    Extremal {
        #[arg(long)]
        n: usize,
        /// Base coefficients, `re [im]` per line.
        #[arg(long, value_name = "FILE")]
        coeffs: Option<PathBuf>,
        /// Also write the polynomial.
        #[arg(long, value_name = "FILE")]
        poly_out: Option<PathBuf>,
    },
    /// Phase plot as binary PPM.
    Plot {
        #[command(flatten)]
        input: Input,
        #[arg(long, num_args = 4, value_names = ["RE_MIN", "RE_MAX", "IM_MIN", "IM_MAX"], allow_negative_numbers = true)]
        window: Vec<f64>,
        #[arg(long, num_args = 2, value_names = ["W", "H"])]
        size: Vec<usize>,
        /// Plot P(z exp(|z|²)).
        #[arg(long)]
        contract: bool,
        /// Census CSV whose zeros are marked.
        #[arg(long, value_name = "FILE")]
        marks: Option<PathBuf>,
        #[arg(short, long, value_name = "FILE")]
        output: PathBuf,
    },
    /// Degree-n polynomial with exactly k zeros (k in 0..=n, n², or inf).
    Construct {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: ZeroCount,
        #[arg(short, long, value_name = "FILE")]
        output: Option<PathBuf>,
    },
}

/// Runs the command line `argv` (including the program name).
pub fn run<I, S>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(text.as_bytes());
                    EXIT_OK
                }
                _ => {
                    let _ = err.write_all(text.as_bytes());
                    EXIT_USAGE
                }
            };
        }
    };
    let (mut obuf, mut ebuf) = (Vec::new(), Vec::new());
    let result = match cli.threads {
        Some(0) => Err(Error::InvalidArgument("--threads must be positive".into())),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))
            .and_then(|pool| pool.install(|| dispatch(&cli, &mut obuf, &mut ebuf))),
        None => dispatch(&cli, &mut obuf, &mut ebuf),
    };
    let _ = out.write_all(&obuf);
    let _ = err.write_all(&ebuf);
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            if e.is_usage() {
                EXIT_USAGE
            } else {
                EXIT_DOMAIN
            }
        }
    }
}

fn io_out(e: std::io::Error) -> Error {
    Error::io("<stdout>", e)
}

fn dispatch(cli: &Cli, out: &mut Vec<u8>, err: &mut Vec<u8>) -> Result<()> {
    let verbose = cli.verbose > 0;
    match &cli.command {
        Command::Analyze {
            input,
            irreducible,
            json,
        } => analyze(&input.load()?, *irreducible, *json, out),
        Command::Bounds { input } => {
            let p = input.load()?;
            let report = bounds::bounds_report(&p)?;
            let r = report.radii.ok_or(Error::NotDominant)?;
            if verbose {
                let c: Vec<String> = r.c.iter().map(|v| fmt_num(*v)).collect();
                writeln!(
                    err,
                    "degree={} ell={} alpha_n={} c=[{}]",
                    report.degree,
                    r.ell,
                    fmt_num(r.alpha_n),
                    c.join(",")
                )
                .map_err(io_out)?;
            }
            writeln!(out, "r0={} r1={} r2={}", fmt_num(r.r0), fmt_num(r.r1), fmt_num(r.r2)).map_err(io_out)
        }
        Command::Wind {
            input,
            center,
            radius,
            annulus,
        } => {
            let p = input.load()?;
            let wind = match (annulus, radius) {
                (Some(a), _) => winding::winding_annulus(&p, a[0], a[1])?,
                (None, Some(r)) => {
                    let c = center
                        .as_ref()
                        .map_or(Complex64::new(0.0, 0.0), |c| Complex64::new(c[0], c[1]));
                    let res = winding::winding(&p, &Curve::circle(c, *r)?, None)?;
                    if verbose {
                        writeln!(err, "samples={} min_modulus={}", res.samples, fmt_num(res.min_modulus))
                            .map_err(io_out)?;
                    }
                    res.wind
                }
                (None, None) => return Err(Error::InvalidArgument("need --radius or --annulus".into())),
            };
            writeln!(out, "wind={wind}").map_err(io_out)
        }
        Command::Roots {
            input,
            radius,
            spacing,
            seeds_file,
        } => {
            let p = input.load()?;
            let radius = match radius {
                Some(r) => *r,
                None => default_disk_radius(&p)?,
            };
            let seeds = match seeds_file {
                Some(f) => parse_complex_list(&read_text(f)?)?,
                None => Vec::new(),
            };
            let census = rootfind::zero_atlas_spaced(&p, radius, &NewtonOptions::default(), &seeds, *spacing)?;
            write_census(&census, out)?;
            writeln!(
                err,
                "zeros={} total_winding={} certified={} radius={}",
                census.zeros.len(),
                census.total_winding,
                census.certified,
                fmt_num(radius)
            )
            .map_err(io_out)
        }
        Command::Extremal { n, coeffs, poly_out } => {
            let base = match coeffs {
                Some(f) => Some(parse_complex_list(&read_text(f)?)?),
                None => None,
            };
            let schedule = extremal::extremal_coefficients(*n, base.as_deref())?;
            let v = extremal::verify_extremal(&schedule)?;
            writeln!(out, "# schedule\nk,a_re,a_im,r,margin").map_err(io_out)?;
            for (k, ((a, r), m)) in schedule.a.iter().zip(&schedule.r).zip(&schedule.margins).enumerate() {
                writeln!(
                    out,
                    "{},{},{},{},{}",
                    k + 1,
                    fmt_num(a.re),
                    fmt_num(a.im),
                    fmt_num(*r),
                    fmt_num(*m)
                )
                .map_err(io_out)?;
            }
            writeln!(out, "# census").map_err(io_out)?;
            write_census(&v.census, out)?;
            writeln!(out, "max_relative_residual={}", fmt_num(v.max_relative_residual)).map_err(io_out)?;
            if let Some(path) = poly_out {
                write_poly(&extremal::extremal_poly(&schedule), path)?;
            }
            Ok(())
        }
        Command::Plot {
            input,
            window,
            size,
            contract,
            marks,
            output,
        } => {
            let p = input.load()?;
            let win = Window::new(window[0], window[1], window[2], window[3])?;
            let premap = if *contract {
                Premap::Contraction
            } else {
                Premap::Identity
            };
            let mut img = render::render_phase(&p, win, size[0], size[1], premap)?;
            if let Some(m) = marks {
                render::draw_markers(&mut img, &parse_census_csv(&read_text(m)?)?, premap);
            }
            render::write_ppm(&img.raster, output)?;
            if img.nonfinite_pixels > 0 || verbose {
                writeln!(err, "nonfinite_pixels={}", img.nonfinite_pixels).map_err(io_out)?;
            }
            Ok(())
        }
        Command::Construct { n, k, output } => {
            let p = zerotheory::poly_with_k_zeros(*n, *k)?;
            match output {
                Some(path) => write_poly(&p, path),
                None => out.write_all(write_poly_string(&p).as_bytes()).map_err(io_out),
            }
        }
    }
}

/// `1.25 r0 + 0.25`, which encloses every zero with room to spare.
pub fn default_disk_radius(p: &PolyPoly) -> Result<f64> {
    let r = bounds::bounds_report(p)?
        .radii
        .ok_or_else(|| Error::InvalidArgument("no dominant top-degree coefficient; pass --radius".into()))?;
    Ok(1.25 * r.r0 + 0.25)
}

fn analyze(p: &PolyPoly, irreducible: bool, as_json: bool, out: &mut dyn Write) -> Result<()> {
    let d = p.degrees().ok_or(Error::ZeroPolynomial)?;
    let ex = zerotheory::existence(p)?;
    let cert = zerotheory::finiteness_certificate(p, irreducible)?;
    let bound = zerotheory::max_zero_bound_with(p, &cert).ok();
    let witness = match cert {
        FinitenessCertificate::AsymmetricCoefficient { j, k } => Some(format!("{j},{k}")),
        FinitenessCertificate::SelfConjugate { lambda } => {
            Some(format!("{},{}", fmt_num(lambda.re), fmt_num(lambda.im)))
        }
        _ => None,
    };
    if as_json {
        let v = json!({
            "degree": d.deg,
            "deg_z": d.deg_z,
            "deg_zbar": d.deg_zbar,
            "balk": ex.balk,
            "dominant_ell": ex.dominant_ell,
            "existence_guaranteed": ex.guaranteed,
            "finiteness": cert.name(),
            "witness": witness,
            "max_zeros": bound,
        });
        writeln!(out, "{v}").map_err(io_out)
    } else {
        let opt = |o: Option<String>, none: &str| o.unwrap_or_else(|| none.to_string());
        let text = format!(
            "degree={}\ndeg_z={}\ndeg_zbar={}\nbalk={}\ndominant_ell={}\nexistence={}\nfiniteness={}\nwitness={}\nmax_zeros={}\n",
            d.deg,
            d.deg_z,
            d.deg_zbar,
            ex.balk,
            opt(ex.dominant_ell.map(|l| l.to_string()), "none"),
            if ex.guaranteed { "guaranteed" } else { "undetermined" },
            cert.name(),
            opt(witness, "none"),
            opt(bound.map(|b| b.to_string()), "not-established"),
        );
        out.write_all(text.as_bytes()).map_err(io_out)
    }
}

/// `re,im,index,jac_sign,residual`; an unknown index is left empty.
pub fn census_csv(census: &ZeroCensus) -> String {
    let mut s = String::from("re,im,index,jac_sign,residual\n");
    for z in &census.zeros {
        let idx = z.index.map(|i| i.to_string()).unwrap_or_default();
        s.push_str(&format!(
            "{},{},{},{},{}\n",
            fmt_num(z.z.re),
            fmt_num(z.z.im),
            idx,
            z.jacobian_sign.as_i8(),
            fmt_num(z.residual)
        ));
    }
    s
}

fn write_census(census: &ZeroCensus, out: &mut dyn Write) -> Result<()> {
    out.write_all(census_csv(census).as_bytes()).map_err(io_out)
}

fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

/// One complex number per line as `re` or `re im`; `#` comments.
pub fn parse_complex_list(text: &str) -> Result<Vec<Complex64>> {
    let mut v = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: String| Error::Parse { line: i + 1, msg };
        let nums: Vec<f64> = line
            .split_whitespace()
            .map(|s| s.parse::<f64>().map_err(|e| err(format!("bad number {s:?}: {e}"))))
            .collect::<Result<_>>()?;
        let c = match nums[..] {
            [re] => Complex64::new(re, 0.0),
            [re, im] => Complex64::new(re, im),
            _ => return Err(err(format!("expected `re [im]`, found {} fields", nums.len()))),
        };
        if !(c.re.is_finite() && c.im.is_finite()) {
            return Err(err("non-finite value".into()));
        }
        v.push(c);
    }
    Ok(v)
}

/// Zero locations from census CSV (first two columns, header optional).
pub fn parse_census_csv(text: &str) -> Result<Vec<Complex64>> {
    let mut v = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') || line.starts_with("re,") {
            continue;
        }
        let mut cols = line.split(',');
        let mut num = || -> Result<f64> {
            let s = cols.next().unwrap_or("").trim();
            s.parse::<f64>().map_err(|e| Error::Parse {
                line: i + 1,
                msg: format!("bad coordinate {s:?}: {e}"),
            })
        };
        v.push(Complex64::new(num()?, num()?));
    }
    Ok(v)
}
