use crate::{CliCommand, CliOracleCommand};
use anyhow::{bail, Context, Result};
use cycleops::bockstein::{bockstein_b, cyc_0, cyc_poly_mass_series, SeriesOptions};
use cycleops::cellular::{lens_complex, mapping_cone_degree_p};
use cycleops::chain::ZeroChain;
use cycleops::coeff::Prime;
use cycleops::exec::Exec;
use cycleops::flatnorm::{flat_distance_0, flat_oracle_0, FlatOptions};
use cycleops::fourier::{build_dft, DiagonalExcisionMap};
use cycleops::gluing::{standard_gluing, GluingOptions};
use cycleops::io::{ChainFile, CycFile, FamilyFile, Meta};
use cycleops::scalar::Scalar;
use cycleops::steenrod::{sq_planar, steenrod_coefficient};
use cycleops::subspace::Subspace;
use cycleops::verify::{generic_four_cycle, rational_triangle, run_all, square_cycle};
use num::BigRational;
use serde::Deserialize;
use serde_json::json;
use sha2::{Digest, Sha256};
use std::fs;
use std::io::Write;
use std::path::Path;

fn meta(seed: u64, config: &str) -> Meta {
    let mut hasher = Sha256::new();
    hasher.update(config.as_bytes());
    let digest = hasher.finalize();
    Meta {
        tool: "cycleops".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        seed,
        config_hash: hex_prefix(&digest, 16),
    }
}

fn hex_prefix(bytes: &[u8], n: usize) -> String {
    bytes
        .iter()
        .take(n / 2)
        .map(|b| format!("{b:02x}"))
        .collect()
}

fn read_chain_file(path: &Path) -> Result<ChainFile> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| {
        format!("parsing {} (line/column in the cause below)", path.display())
    })
}

fn write_json<T: serde::Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    fs::write(path, s).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

pub fn run(cmd: CliCommand) -> Result<bool> {
    match cmd {
        CliCommand::Flatnorm {
            a,
            b,
            oracle,
            certificate,
            cap,
        } => flatnorm_cmd(&a, &b, oracle, certificate.as_deref(), cap),
        CliCommand::Bockstein { input, out } => bockstein_cmd(&input, &out),
        CliCommand::Cyc { input, out } => cyc_cmd(&input, &out),
        CliCommand::CycMass {
            input,
            imax,
            samples,
            seed,
            report,
        } => cyc_mass_cmd(&input, imax, &samples, seed, &report),
        CliCommand::Sq {
            n,
            k,
            i,
            plane,
            sample,
            seed,
            out,
        } => sq_cmd(n, k, i, &plane, sample, seed, &out),
        CliCommand::Coeff { p, n, i } => {
            let prime = Prime::new(p)?;
            let (c_p, c_bp) = steenrod_coefficient(prime, n, i);
            println!(
                "{}",
                json!({"p": p, "n": n, "i": i, "c_P": c_p, "c_betaP": c_bp})
            );
            Ok(true)
        }
        CliCommand::FourierCheck { p, n } => fourier_check_cmd(p, n),
        CliCommand::Glue {
            family,
            chain,
            out,
            check_boundary,
            perturb_seed,
        } => glue_cmd(&family, &chain, &out, check_boundary, perturb_seed),
        CliCommand::Oracle { what } => oracle_cmd(what),
        CliCommand::Figures {
            which,
            p,
            square,
            pair,
            sample,
            seed,
            out,
        } => figures_cmd(&which, p, square, pair, sample, seed, &out),
        CliCommand::VerifyAll { seed, only, report } => {
            verify_all_cmd(seed, only.as_deref(), report.as_deref())
        }
    }
}

fn flatnorm_cmd(
    a: &Path,
    b: &Path,
    oracle: bool,
    certificate: Option<&Path>,
    cap: usize,
) -> Result<bool> {
    let s = read_chain_file(a)?.to_zero_chain()?;
    let t = read_chain_file(b)?.to_zero_chain()?;
    let opts = FlatOptions { unit_cap: cap };
    let r = flat_distance_0(&s, &t, &opts)?;
    let mut pass = true;
    let oracle_value = if oracle {
        let v = flat_oracle_0(&s, &t)?;
        pass = v == r.value;
        Some(v)
    } else {
        None
    };
    println!(
        "{}",
        json!({
            "value": r.value,
            "oracle": oracle_value,
            "agrees": oracle_value.map(|v| v == r.value),
            "p_mass": r.certificate.p_chain.mass(),
            "q_mass": r.certificate.q_chain.mass(),
        })
    );
    if let Some(path) = certificate {
        let m = meta(0, &format!("flatnorm {} {}", a.display(), b.display()));
        let cert = json!({
            "meta": m,
            "cost": r.certificate.cost,
            "p_chain": ChainFile::from_simplicial_chain(&r.certificate.p_chain, None),
            "q_chain": ChainFile::from_zero_chain(&r.certificate.q_chain, None),
        });
        write_json(path, &cert)?;
    }
    Ok(pass)
}

fn bockstein_cmd(input: &Path, out: &Path) -> Result<bool> {
    let t = read_chain_file(input)?.to_zero_chain()?;
    let result = bockstein_b(&t)?;
    if result.cycle_warning {
        eprintln!("warning: input coefficients do not sum to zero mod p");
    }
    let m = meta(0, &format!("bockstein {}", input.display()));
    write_json(out, &ChainFile::from_zero_chain(&result.chain, Some(m)))?;
    Ok(true)
}

fn cyc_cmd(input: &Path, out: &Path) -> Result<bool> {
    let t = read_chain_file(input)?.to_zero_chain()?;
    let result = cyc_0(&t)?;
    if result.cycle_warning {
        eprintln!("warning: input coefficients do not sum to zero mod p");
    }
    let m = meta(0, &format!("cyc {}", input.display()));
    write_json(out, &CycFile::from_output(&result, Some(m)))?;
    Ok(true)
}

fn cyc_mass_cmd(
    input: &Path,
    imax: usize,
    samples: &str,
    seed: u64,
    report: &Path,
) -> Result<bool> {
    let r = read_chain_file(input)?.to_simplicial_chain()?;
    let samples_f: f64 = samples
        .parse()
        .with_context(|| format!("parsing sample count {samples:?}"))?;
    let opts = SeriesOptions {
        i_max: imax,
        samples: samples_f as usize,
        seed,
        exec: Exec::Parallel,
    };
    let s = cyc_poly_mass_series(&r, &opts)?;
    let m = meta(seed, &format!("cyc-mass {} imax={imax} samples={samples}", input.display()));
    write_json(
        report,
        &json!({
            "meta": m,
            "input_mass": s.input_mass,
            "radii": s.radii,
            "mass": s.mass,
            "boundary_mass": s.boundary_mass,
            "cauchy_fit": {"c": s.cauchy_fit.c, "r_squared": s.cauchy_fit.r_squared,
                            "points": s.cauchy_fit.points},
            "boundary_ratio_max": s.boundary_ratio_max,
            "mass_bound_constant": s.mass_bound_constant,
            "samples": s.samples,
        }),
    )?;
    println!(
        "M_i in [{:.4}, {:.4}], Cauchy fit C = {:.4} (R^2 = {:.3}), max B_i/M(R) = {:.3}",
        s.mass.first().copied().unwrap_or(0.0),
        s.mass.last().copied().unwrap_or(0.0),
        s.cauchy_fit.c,
        s.cauchy_fit.r_squared,
        s.boundary_ratio_max
    );
    Ok(true)
}

#[derive(Deserialize)]
struct PlaneFile {
    basis: Vec<Vec<f64>>,
    offset: Vec<f64>,
}

fn sq_cmd(
    n: usize,
    k: usize,
    i: usize,
    plane: &Path,
    sample: usize,
    seed: u64,
    out: &Path,
) -> Result<bool> {
    let text = fs::read_to_string(plane)
        .with_context(|| format!("reading {}", plane.display()))?;
    let pf: PlaneFile = serde_json::from_str(&text)
        .with_context(|| format!("parsing {}", plane.display()))?;
    let v = Subspace::affine(n + 1, &pf.basis, &pf.offset)?;
    let fam = sq_planar(&v, n, k, i)?;
    let pts = fam.sample(sample, seed);
    let m = meta(seed, &format!("sq n={n} k={k} i={i} sample={sample}"));
    let mut f = fs::File::create(out)?;
    writeln!(f, "# tool=cycleops version={} seed={} config={}", m.version, m.seed, m.config_hash)?;
    let dim = fam.ambient_dim();
    let header: Vec<String> = (0..dim)
        .map(|j| format!("q{j}"))
        .chain((0..n + 1).map(|j| format!("line{j}")))
        .collect();
    writeln!(f, "{}", header.join(","))?;
    for (q, line) in &pts {
        let row: Vec<String> = q
            .iter()
            .chain(line.iter())
            .map(|x| format!("{x}"))
            .collect();
        writeln!(f, "{}", row.join(","))?;
    }
    println!("wrote {} support samples to {}", pts.len(), out.display());
    Ok(true)
}

fn fourier_check_cmd(p: u64, n: usize) -> Result<bool> {
    let prime = Prime::new(p)?;
    let dft = build_dft(prime);
    let (orth, diag) = dft.residuals();
    let map = DiagonalExcisionMap::new(prime, n);
    // Kernel residual: the diagonal must die under F_perp.
    let mut kernel_residual: f64 = 0.0;
    for trial in 0..32u64 {
        use rand::Rng;
        let mut rng = cycleops::rng::stratum_rng(trial, 0xF0);
        let x: Vec<f64> = (0..n + 1).map(|_| rng.gen::<f64>() - 0.5).collect();
        let mut diagv = Vec::new();
        for _ in 0..p {
            diagv.extend(x.iter().copied());
        }
        kernel_residual = kernel_residual.max(map.diag_dist(&diagv));
    }
    let pass = orth < 1e-12 && diag < 1e-12 && kernel_residual < 1e-12;
    println!(
        "{}",
        json!({
            "p": p,
            "n": n,
            "orthogonality_residual": orth,
            "diagonalization_residual": diag,
            "diagonal_kernel_residual": kernel_residual,
            "pass": pass,
        })
    );
    Ok(pass)
}

fn glue_cmd(
    family: &Path,
    chain: &Path,
    out: &Path,
    check_boundary: bool,
    perturb_seed: Option<u64>,
) -> Result<bool> {
    let text = fs::read_to_string(family)
        .with_context(|| format!("reading {}", family.display()))?;
    let ff: FamilyFile = serde_json::from_str(&text)
        .with_context(|| format!("parsing {}", family.display()))?;
    let fam = ff.build()?;
    let t = read_chain_file(chain)?.to_simplicial_chain()?;
    let opts = GluingOptions {
        perturb_seed,
        ..Default::default()
    };
    let glued = standard_gluing(&fam, &t, &opts)?;
    let mut pass = true;
    let mut defect = None;
    if check_boundary {
        let lhs = glued.chain.boundary()?;
        let rhs = standard_gluing(&fam, &t.boundary()?, &opts)?.chain;
        let d = lhs.sub(&rhs)?.mass();
        pass = d < 1e-6;
        defect = Some(d);
    }
    let m = meta(
        perturb_seed.unwrap_or(0),
        &format!("glue {} {}", family.display(), chain.display()),
    );
    write_json(out, &ChainFile::from_simplicial_chain(&glued.chain, Some(m)))?;
    println!(
        "{}",
        json!({
            "glued_mass": glued.chain.mass(),
            "mass_constant": glued.constant,
            "input_mass": t.mass(),
            "boundary_defect": defect,
            "perturbed_vertices": glued.perturbation.len(),
        })
    );
    Ok(pass)
}

fn oracle_cmd(what: CliOracleCommand) -> Result<bool> {
    match what {
        CliOracleCommand::Lens { p, dim } => {
            let prime = Prime::new(p)?;
            let cx = lens_complex(prime, dim)?;
            let mut hz = Vec::new();
            let mut hp = Vec::new();
            for k in 0..=dim {
                let h = cx.homology_z(k);
                hz.push(json!({"k": k, "rank": h.rank,
                               "torsion": h.torsion.iter().map(|t| t.to_string()).collect::<Vec<_>>()}));
                hp.push(json!({"k": k, "dim": cx.homology_dim_zp(k, prime)}));
            }
            println!(
                "{}",
                json!({"p": p, "top_dim": dim, "H_integral": hz, "H_mod_p": hp})
            );
            Ok(true)
        }
        CliOracleCommand::BocksteinCheck { p } => {
            let prime = Prime::new(p)?;
            let cone = mapping_cone_degree_p(prime);
            let psi = vec![1u64];
            let lift: Vec<i64> = psi.iter().map(|&v| v as i64).collect();
            let delta = cone.coboundary(1, &lift)?;
            let beta = cone.bockstein_snake(1, &psi, prime, None)?;
            let beta2 = cone.bockstein_snake(1, &psi, prime, Some(3))?;
            let pass = beta == vec![1] && cone.cohomologous(2, &beta, &beta2, prime);
            println!(
                "{}",
                json!({
                    "p": p,
                    "psi": psi,
                    "lift": lift,
                    "delta_lift": delta,
                    "beta": beta,
                    "beta_second_lift": beta2,
                    "pass": pass,
                })
            );
            Ok(pass)
        }
    }
}

fn figures_cmd(
    which: &str,
    p: u64,
    square: bool,
    pair: bool,
    sample: usize,
    seed: u64,
    out: &Path,
) -> Result<bool> {
    let m = meta(seed, &format!("figures {which} p={p} square={square} pair={pair}"));
    let mut f = fs::File::create(out)?;
    writeln!(f, "# tool=cycleops version={} seed={} config={}", m.version, m.seed, m.config_hash)?;
    match which {
        "fig2" => {
            match p {
                2 => {
                    let input = if pair {
                        pair_cycle()
                    } else if square {
                        square_cycle()
                    } else {
                        generic_four_cycle()
                    };
                    let b = bockstein_b(&input)?.chain;
                    writeln!(f, "role,x0,x1,c")?;
                    write_rat_rows(&mut f, "input", &input)?;
                    write_rat_rows(&mut f, "bockstein", &b)?;
                }
                3 => {
                    let input = rational_triangle();
                    let b = bockstein_b(&input)?.chain;
                    writeln!(f, "role,x0,x1,c")?;
                    write_rat_rows(&mut f, "input", &input)?;
                    write_rat_rows(&mut f, "bockstein", &b)?;
                }
                other => bail!("fig2 ships for p = 2 or 3, got {other}"),
            }
            Ok(true)
        }
        "fig3" => {
            let input = square_cycle();
            let out3 = cyc_0(&input)?;
            writeln!(f, "line_angle,line_x,line_y,mid_x,mid_y,c")?;
            for atom in &out3.atoms {
                let d: Vec<f64> = match &atom.lens {
                    cycleops::bockstein::LensComponent::Direction(d) => {
                        let v: Vec<f64> = d.iter().map(|x| x.to_f64()).collect();
                        let n = (v[0] * v[0] + v[1] * v[1]).sqrt();
                        vec![v[0] / n, v[1] / n]
                    }
                    cycleops::bockstein::LensComponent::Orbit(o) => o.rep.clone(),
                };
                let angle = d[1].atan2(d[0]);
                writeln!(
                    f,
                    "{},{},{},{},{},{}",
                    angle,
                    d[0],
                    d[1],
                    atom.disk[0].to_f64(),
                    atom.disk[1].to_f64(),
                    atom.c
                )?;
            }
            Ok(true)
        }
        "fig4" => {
            // The planar Steenrod support for the plane parallel to the
            // xz-plane at height 1/2, n = 2, k = 1, i = 1.
            let v = Subspace::affine(
                3,
                &[vec![1.0, 0.0, 0.0], vec![0.0, 0.0, 1.0]],
                &[0.0, 0.5, 0.0],
            )?;
            let fam = sq_planar(&v, 2, 1, 1)?;
            let pts = fam.sample(sample, seed);
            writeln!(f, "q0,q1,q2,q3,q4,q5,line0,line1,line2")?;
            for (q, line) in &pts {
                let row: Vec<String> = q
                    .iter()
                    .chain(line.iter())
                    .map(|x| format!("{x}"))
                    .collect();
                writeln!(f, "{}", row.join(","))?;
            }
            Ok(true)
        }
        other => bail!("unknown figure id {other}"),
    }
}

fn write_rat_rows(
    f: &mut fs::File,
    role: &str,
    chain: &ZeroChain<BigRational>,
) -> Result<()> {
    for a in chain.atoms() {
        writeln!(
            f,
            "{},{},{},{}",
            role,
            a.x[0].to_f64(),
            a.x[1].to_f64(),
            a.c
        )?;
    }
    Ok(())
}

fn verify_all_cmd(seed: u64, only: Option<&str>, report: Option<&Path>) -> Result<bool> {
    let results = run_all(seed, only);
    if results.is_empty() {
        bail!("no criterion matches {only:?}");
    }
    let mut all = true;
    for r in &results {
        println!(
            "[{}] {:>2} {:<22} ({} ms) {}",
            if r.passed { "PASS" } else { "FAIL" },
            r.id,
            r.name,
            r.millis,
            r.details
        );
        all &= r.passed;
    }
    if let Some(path) = report {
        let m = meta(seed, &format!("verify-all only={only:?}"));
        let payload = json!({
            "meta": m,
            "passed": all,
            "criteria": results.iter().map(|r| json!({
                "id": r.id,
                "name": r.name,
                "passed": r.passed,
                "millis": r.millis,
                "details": r.details,
            })).collect::<Vec<_>>(),
        });
        write_json(path, &payload)?;
    }
    Ok(all)
}

/// Two rational points on the circle: the smallest Bockstein input,
/// producing a single midpoint.
fn pair_cycle() -> ZeroChain<BigRational> {
    let r = |n: i64, d: i64| BigRational::new(n.into(), d.into());
    ZeroChain::new(
        cycleops::ambient::Ambient::Sphere { dim: 1 },
        Prime::new(2).unwrap(),
        false,
        vec![
            (vec![r(1, 1), r(0, 1)], 1),
            (vec![r(0, 1), r(1, 1)], 1),
        ],
    )
    .unwrap()
}
