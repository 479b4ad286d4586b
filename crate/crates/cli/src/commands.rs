//! The four subcommands. Each turns a resolved [`RunConfig`] into a
//! [`Report`]; parameter problems surface as [`UsageError`].

use rayon::prelude::*;
use serde_json::{Map, Value};

use pbosons::fock::{interior_defect, FockOperator, FockSpace};
use pbosons::intertwine::{frame_action_check, frame_operator, intertwining_check, resolution_check, Side};
use pbosons::landau::{
    build_quadratures, coordinate_form_defect, deformed_hamiltonian, hamiltonian,
    single_index_counterexample, two_index_family, LandauModel,
};
use pbosons::nogo::{classify, crossing_estimate, nogo_commutator_check, solve_kernel, NogoFamily};
use pbosons::pairs::{
    assumption_report, build_pair, gaussian_vacuum_norm_sq, phi_closed_form, phi_ladder,
    psi_ladder, psi_series, radius_scan, reconstruction_probes, spectral_residuals, tail_bound_phi,
    tail_bound_psi, BiorthogonalSystem, DeformationFamily, FamilyKind, ScanConfig, SeriesClass,
};
use pbosons::{Error, C64};

use crate::config::{Defaults, RunConfig, Usage, UsageError};
use crate::report::{num, CheckReport, Report, Table};

/// Parameters at or beyond this modulus converge slowly and are flagged.
const NEAR_BOUNDARY: f64 = 0.45;

pub const VERIFY_DEFAULTS: Defaults = Defaults {
    families: &["gauss-lowering", "gauss-raising"],
    dim: 96,
    nmax: 16,
    margin: 2,
    tolerances: &[
        ("biorthonormality", 1e-10),
        ("commutator", 1e-12),
        ("dual_ladder", 1e-10),
        ("dual_vacuum", 1e-10),
        ("eigen_phi", 1e-9),
        ("eigen_psi", 1e-8),
        ("frame_action", 1e-9),
        ("frame_positivity", 1e-10),
        ("hermiticity", 1e-12),
        ("intertwining", 1e-9),
        ("ladder", 1e-10),
        ("norm_closed_form", 1e-12),
        ("reconstruction", 1e-9),
        ("tail_bound", 1e-10),
        ("vacuum", 1e-12),
    ],
};

pub const SWEEP_DEFAULTS: Defaults = Defaults {
    families: &["gauss-lowering", "gauss-raising"],
    dim: 96,
    nmax: 16,
    margin: 2,
    tolerances: &[],
};

pub const NOGO_DEFAULTS: Defaults = Defaults {
    families: &["power-raising", "dual-power-lowering"],
    dim: 64,
    nmax: 0,
    margin: 0,
    tolerances: &[("commutator", 1e-12)],
};

pub const LANDAU_DEFAULTS: Defaults = Defaults {
    families: &["landau"],
    dim: 24,
    nmax: 6,
    margin: 4,
    tolerances: &[
        ("biorthonormality", 1e-9),
        ("coordinate_form", 1e-10),
        ("counterexample", 1e-9),
        ("counterexample_norm", 1.0),
        ("eigen_phi", 1e-9),
        ("eigen_psi", 1e-8),
        ("hamiltonian", 1e-12),
        ("quadrature", 1e-12),
    ],
};

const DEFAULT_KMAX: usize = 200;
const DEFAULT_GRID: &[f64] = &[0.1, 0.2, 0.3, 0.4, 0.45];

fn complex_json(z: C64) -> Value {
    Value::Array(vec![num(z.re), num(z.im)])
}

fn meta(cfg: &RunConfig, warnings: &[String]) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("tool".into(), "pbosons".into());
    m.insert("version".into(), env!("CARGO_PKG_VERSION").into());
    m.insert("command".into(), cfg.command.into());
    m.insert("family".into(), cfg.family.clone().into());
    m.insert("alpha".into(), complex_json(cfg.alpha));
    m.insert("beta".into(), complex_json(cfg.beta));
    m.insert("dim".into(), cfg.dim.into());
    m.insert("nmax".into(), cfg.nmax.into());
    m.insert("margin".into(), cfg.margin.into());
    if cfg.command == "nogo" {
        m.insert("power".into(), cfg.power.into());
        m.insert("kmax".into(), cfg.kmax.unwrap_or(DEFAULT_KMAX).into());
    }
    if cfg.command == "sweep" {
        let grid = cfg.grid.clone().unwrap_or_else(|| DEFAULT_GRID.to_vec());
        m.insert("grid".into(), grid.into_iter().map(num).collect());
    }
    let tolerances: Map<String, Value> = cfg.tolerances.iter().map(|(k, v)| (k.clone(), num(*v))).collect();
    m.insert("tolerances".into(), Value::Object(tolerances));
    m.insert("format".into(), cfg.format.name().into());
    m.insert(
        "output".into(),
        cfg.output.as_ref().map_or(Value::Null, |p| p.display().to_string().into()),
    );
    m.insert(
        "config".into(),
        cfg.config_file.as_ref().map_or(Value::Null, |p| p.display().to_string().into()),
    );
    m.insert("warnings".into(), warnings.iter().map(|w| Value::from(w.as_str())).collect());
    m
}

fn require_disk(family: DeformationFamily) -> Usage<()> {
    if family.in_disk() {
        return Ok(());
    }
    Err(Error::OutsideDisk {
        name: family.kind.parameter_name(),
        abs: family.parameter.norm(),
        limiting_ratio: family.limiting_ratio(),
    }
    .into())
}

fn boundary_warning(family: DeformationFamily) -> Option<String> {
    let abs = family.parameter.norm();
    (abs >= NEAR_BOUNDARY).then(|| {
        format!(
            "|{}| = {abs} is near the disk boundary: slow geometric decay (term ratio -> {:.4})",
            family.kind.parameter_name(),
            family.limiting_ratio()
        )
    })
}

/// Largest dimension [`geometric_dim`] will raise to.
const MAX_AUTO_DIM: usize = 1024;

/// Smallest dimension `>= dim` at which the series side of index `n` is
/// truncated in its geometric regime, with a warning when raised.
fn geometric_dim(family: DeformationFamily, dim: usize, n: usize) -> Usage<(usize, Option<String>)> {
    let mut d = dim;
    loop {
        let space = FockSpace::single(d)?;
        let tail = match family.kind {
            FamilyKind::GaussLowering => tail_bound_psi(family, n, space),
            FamilyKind::GaussRaising => tail_bound_phi(family, n, space),
        };
        match tail {
            Ok(_) if d == dim => return Ok((d, None)),
            Ok(_) => {
                let note = format!("dim raised from {dim} to {d} so the series tail of index {n} is geometric");
                return Ok((d, Some(note)));
            }
            Err(Error::TailNotGeometric { .. }) if d < MAX_AUTO_DIM => d = (d + d / 2).min(MAX_AUTO_DIM),
            Err(e) => return Err(e.into()),
        }
    }
}

fn max_of(it: impl IntoIterator<Item = f64>) -> f64 {
    it.into_iter().fold(0.0, f64::max)
}

pub fn verify(cfg: &RunConfig) -> Usage<Report> {
    let family = DeformationFamily::new(cfg.kind()?, cfg.family_parameter()?);
    require_disk(family)?;
    let n_max = cfg.nmax;
    let (dim, raised) = geometric_dim(family, cfg.dim, n_max)?;
    let warnings: Vec<String> = boundary_warning(family).into_iter().chain(raised).collect();
    let space = FockSpace::single(dim)?;
    let pair = build_pair(family, space)?;
    let system = BiorthogonalSystem::for_family(family, space, n_max)?;
    let mut meta = meta(cfg, &warnings);
    meta.insert("effective_dim".into(), dim.into());
    let mut report = Report::new(meta);
    let checks = &mut report.checks;

    let comm = pair.a().commutator(pair.b())?;
    let defect = interior_defect(&comm, &FockOperator::identity(space), cfg.margin)?;
    checks.push(CheckReport::at_most("commutator", defect, cfg.tol("commutator"), "[A,B] = 1 on the interior"));

    checks.push(CheckReport::at_most(
        "biorthonormality",
        system.max_pairing_defect(),
        cfg.tol("biorthonormality"),
        "<Psi_n, phi_m> = delta_nm",
    ));

    // Truncation reaches at most n rows into the n-th ladder vector.
    let rows = n_max + 1;
    let mut ladder: f64 = 0.0;
    for (n, v) in phi_ladder(&pair, n_max)?.iter().enumerate() {
        ladder = ladder.max(v.sub(&system.phis[n])?.interior_norm(rows)?);
    }
    checks.push(CheckReport::at_most(
        "ladder",
        ladder,
        cfg.tol("ladder"),
        "phi_n = B^n phi_0 / sqrt(n!) matches the closed form below the top nmax + 1 rows",
    ));
    let mut dual: f64 = 0.0;
    for (n, v) in psi_ladder(&pair, n_max)?.iter().enumerate() {
        dual = dual.max(v.sub(&system.psis[n])?.interior_norm(rows)?);
    }
    checks.push(CheckReport::at_most(
        "dual_ladder",
        dual,
        cfg.tol("dual_ladder"),
        "Psi_n = (A^dag)^n Psi_0 / sqrt(n!) matches the closed form below the top nmax + 1 rows",
    ));

    let spectral = spectral_residuals(&pair, &system)?;
    checks.push(CheckReport::at_most(
        "eigen_phi",
        max_of(spectral.iter().map(|r| r.phi_relative)),
        cfg.tol("eigen_phi"),
        "h phi_n = (n + 1/2) phi_n, relative residual",
    ));
    checks.push(CheckReport::at_most(
        "eigen_psi",
        max_of(spectral.iter().map(|r| r.psi_residual)),
        cfg.tol("eigen_psi"),
        "h^dag Psi_n = (n + 1/2) Psi_n",
    ));

    let assumptions = assumption_report(family, space, n_max)?;
    checks.push(CheckReport::at_most(
        "vacuum",
        assumptions.vacuum_residual,
        cfg.tol("vacuum"),
        "A phi_0 = 0",
    ));
    checks.push(CheckReport::at_most(
        "dual_vacuum",
        assumptions.dual_vacuum_residual,
        cfg.tol("dual_vacuum"),
        "B^dag Psi_0 = 0",
    ));

    let (series_vacuum, tail) = match family.kind {
        FamilyKind::GaussLowering => (psi_series(family, 0, space)?, tail_bound_psi(family, 0, space)?),
        FamilyKind::GaussRaising => (phi_closed_form(family, 0, space)?, tail_bound_phi(family, 0, space)?),
    };
    let closed = gaussian_vacuum_norm_sq(family.parameter.norm());
    checks.push(CheckReport::at_most(
        "norm_closed_form",
        (series_vacuum.norm_squared() - closed).abs(),
        tail + cfg.tol("norm_closed_form"),
        "series-side vacuum norm^2 = (1 - 4|p|^2)^(-1/2) (tolerance includes the tail bound)",
    ));
    checks.push(CheckReport::at_most(
        "tail_bound",
        tail,
        cfg.tol("tail_bound"),
        "certified tail of the series-side vacuum",
    ));

    let s_phi = frame_operator(&system, Side::Phi, n_max)?;
    let s_psi = frame_operator(&system, Side::Psi, n_max)?;
    let mut action: f64 = 0.0;
    let mut inter: f64 = 0.0;
    for n in 0..=n_max {
        let fa = frame_action_check(&s_phi, &s_psi, &system, n)?;
        action = action.max(fa.phi_from_psi).max(fa.psi_from_phi);
        if n < n_max {
            let it = intertwining_check(&system, &pair, &s_phi, &s_psi, n)?;
            inter = inter.max(it.psi_side).max(it.phi_side);
        }
    }
    checks.push(CheckReport::at_most(
        "frame_action",
        action,
        cfg.tol("frame_action"),
        "S_phi Psi_n = phi_n and S_Psi phi_n = Psi_n",
    ));
    checks.push(CheckReport::at_most(
        "intertwining",
        inter,
        cfg.tol("intertwining"),
        "S_Psi N = N^dag S_Psi and N S_phi = S_phi N^dag on the families",
    ));
    checks.push(CheckReport::at_most(
        "hermiticity",
        s_phi.hermiticity_defect().max(s_psi.hermiticity_defect()),
        cfg.tol("hermiticity"),
        "S_phi and S_Psi are Hermitian",
    ));
    let lowest = s_phi.min_eigenvalue().min(s_psi.min_eigenvalue());
    checks.push(CheckReport::at_most(
        "frame_positivity",
        (-lowest).max(0.0),
        cfg.tol("frame_positivity"),
        "S_phi and S_Psi are positive semidefinite (observed = max(0, -lambda_min))",
    ));

    let mut recon: f64 = 0.0;
    for probe in reconstruction_probes(space)? {
        if probe.support_max().unwrap_or(0) <= n_max {
            let r = resolution_check(&system, &probe, n_max)?;
            // expand over the finitely supported family
            recon = recon.max(match family.kind {
                FamilyKind::GaussLowering => r.phi_expansion,
                FamilyKind::GaussRaising => r.psi_expansion,
            });
        }
    }
    checks.push(CheckReport::at_most(
        "reconstruction",
        recon,
        cfg.tol("reconstruction"),
        "v = sum_n <Psi_n, v> phi_n (lowering) or sum_n <phi_n, v> Psi_n (raising) for finitely supported probes",
    ));

    for name in ["coordinate_form", "counterexample"] {
        checks.push(CheckReport::not_applicable(
            name,
            "two-mode check; run the landau subcommand",
        ));
    }

    let mut omega = Table::new(&["n", "phi_norm", "psi_norm", "omega"]);
    for n in 0..system.len() {
        omega.push(vec![
            n.into(),
            system.phis[n].norm().into(),
            system.psis[n].norm().into(),
            system.omega[n].into(),
        ]);
    }
    let mut frames = Table::new(&["side", "order", "lambda_min", "lambda_max"]);
    for s in [&s_phi, &s_psi] {
        frames.push(vec![
            format!("{:?}", s.side).to_lowercase().into(),
            s.order.into(),
            s.min_eigenvalue().into(),
            s.max_eigenvalue().into(),
        ]);
    }
    let mut diag = Table::new(&["quantity", "value"]);
    diag.push(vec!["omega_growth".into(), assumptions.omega_growth.into()]);
    diag.push(vec![
        "riesz_failure_evidence".into(),
        if assumptions.riesz_failure_evidence { "true" } else { "false" }.into(),
    ]);
    diag.push(vec!["limiting_ratio".into(), family.limiting_ratio().into()]);
    report.tables = vec![("omega", omega), ("frames", frames), ("diagnostics", diag)];
    Ok(report)
}

struct SweepRow {
    parameter: f64,
    limiting_ratio: f64,
    class: SeriesClass,
    blow_up_index: Option<usize>,
    norm_sq: Option<f64>,
    closed_form: Option<f64>,
    tail: Option<f64>,
    omega_ratio: Option<f64>,
    lambda_phi: Option<f64>,
    lambda_psi: Option<f64>,
    dim: Option<usize>,
    note: String,
}

fn sweep_point(kind: FamilyKind, p: f64, dim: usize, n_max: usize) -> SweepRow {
    let family = DeformationFamily::new(kind, C64::new(p, 0.0));
    let scan = radius_scan(kind, 0, &[family.parameter], ScanConfig::default())[0];
    let mut row = SweepRow {
        parameter: p,
        limiting_ratio: scan.limiting_ratio,
        class: scan.class,
        blow_up_index: scan.blow_up_index,
        norm_sq: None,
        closed_form: None,
        tail: None,
        omega_ratio: None,
        lambda_phi: None,
        lambda_psi: None,
        dim: None,
        note: String::new(),
    };
    if scan.class == SeriesClass::Divergent {
        row.note = "outside the convergence disk".into();
        return row;
    }
    let computed = (|| -> Usage<()> {
        let (dim, raised) = geometric_dim(family, dim, n_max)?;
        if raised.is_some() {
            row.dim = Some(dim);
        }
        let space = FockSpace::single(dim)?;
        let (vacuum, tail) = match kind {
            FamilyKind::GaussLowering => (psi_series(family, 0, space)?, tail_bound_psi(family, 0, space)?),
            FamilyKind::GaussRaising => (phi_closed_form(family, 0, space)?, tail_bound_phi(family, 0, space)?),
        };
        row.norm_sq = Some(vacuum.norm_squared());
        row.closed_form = Some(gaussian_vacuum_norm_sq(p.abs()));
        row.tail = Some(tail);
        let system = BiorthogonalSystem::for_family(family, space, n_max)?;
        row.omega_ratio = Some(system.omega[n_max] / system.omega[0]);
        row.lambda_phi = Some(frame_operator(&system, Side::Phi, n_max)?.max_eigenvalue());
        row.lambda_psi = Some(frame_operator(&system, Side::Psi, n_max)?.max_eigenvalue());
        Ok(())
    })();
    if let Err(e) = computed {
        row.note = e.to_string();
    } else if p.abs() >= NEAR_BOUNDARY {
        row.note = "near the disk boundary: slow geometric decay".into();
    }
    if let Some(d) = row.dim {
        row.note = format!("{}; dim raised to {d}", row.note).trim_start_matches("; ").to_string();
    }
    row
}

pub fn sweep(cfg: &RunConfig) -> Usage<Report> {
    let kind = cfg.kind()?;
    let grid = cfg.grid.clone().unwrap_or_else(|| DEFAULT_GRID.to_vec());
    let rows: Vec<SweepRow> = grid
        .par_iter()
        .map(|&p| sweep_point(kind, p, cfg.dim, cfg.nmax))
        .collect();
    let mut table = Table::new(&[
        "parameter",
        "limiting_ratio",
        "class",
        "blow_up_index",
        "norm_sq_trunc",
        "norm_sq_closed_form",
        "tail_bound",
        "omega_ratio",
        "lambda_max_phi",
        "lambda_max_psi",
        "note",
    ]);
    for r in rows {
        table.push(vec![
            r.parameter.into(),
            r.limiting_ratio.into(),
            match r.class {
                SeriesClass::Convergent => "convergent",
                SeriesClass::Divergent => "divergent",
            }
            .into(),
            r.blow_up_index.into(),
            r.norm_sq.into(),
            r.closed_form.into(),
            r.tail.into(),
            r.omega_ratio.into(),
            r.lambda_phi.into(),
            r.lambda_psi.into(),
            r.note.into(),
        ]);
    }
    let mut report = Report::new(meta(cfg, &[]));
    report.tables.push(("sweep", table));
    report.csv_table = Some("sweep");
    Ok(report)
}

pub fn nogo(cfg: &RunConfig) -> Usage<Report> {
    let power = cfg
        .power
        .ok_or_else(|| UsageError("nogo needs --power (an integer >= 2)".into()))?;
    let k_max = cfg.kmax.unwrap_or(DEFAULT_KMAX);
    let family = match cfg.family.as_str() {
        "dual-power-lowering" => NogoFamily::DualPowerLowering {
            power,
            alpha: cfg.alpha,
            beta: cfg.beta,
        },
        _ => NogoFamily::PowerRaising {
            power,
            alpha: cfg.alpha,
            beta: cfg.beta,
        },
    };
    let rec = solve_kernel(family, k_max)?;
    let space = FockSpace::single(cfg.dim)?;
    let ops = nogo_commutator_check(family, space)?;

    let mut report = Report::new(meta(cfg, &[]));
    report.checks.push(CheckReport::at_most(
        "commutator",
        ops.commutator_defect,
        cfg.tol("commutator"),
        "[A,B] = 1 on the interior (margin p + 1) although A^dag != B",
    ));

    let mut coeffs = Table::new(&["k", "index", "log10_abs_sq", "abs", "re", "im"]);
    for (k, t) in rec.terms.iter().enumerate() {
        let v = t.value();
        coeffs.push(vec![
            k.into(),
            t.index.into(),
            (t.log_sq / std::f64::consts::LN_10).into(),
            (0.5 * t.log_sq).exp().into(),
            v.re.into(),
            v.im.into(),
        ]);
    }
    let mut ratios = Table::new(&["k", "ratio"]);
    for (k, r) in rec.ratios.iter().enumerate() {
        ratios.push(vec![k.into(), (*r).into()]);
    }

    let param_abs = family.kernel_parameter().norm();
    let mut class = Table::new(&["quantity", "value"]);
    match classify(&rec) {
        Ok(c) => {
            let name = match c.class {
                SeriesClass::Convergent => "convergent",
                SeriesClass::Divergent => "divergent",
            };
            class.push(vec!["class".into(), name.into()]);
            class.push(vec!["crossing_index".into(), c.crossing_index.into()]);
            class.push(vec![
                "increasing_after_crossing".into(),
                if c.increasing_after_crossing { "true" } else { "false" }.into(),
            ]);
            class.push(vec!["blow_up_index".into(), c.blow_up_index.into()]);
            class.push(vec!["last_ratio".into(), c.last_ratio.into()]);
        }
        Err(e) => {
            class.push(vec!["class".into(), "inconclusive".into()]);
            class.push(vec!["reason".into(), e.to_string().into()]);
        }
    }
    if param_abs > 0.0 {
        class.push(vec!["crossing_estimate".into(), crossing_estimate(power, param_abs).into()]);
    }
    let mut operators = Table::new(&["quantity", "value"]);
    operators.push(vec!["adjoint_gap".into(), ops.adjoint_gap.into()]);
    operators.push(vec!["commutator_margin".into(), ops.margin.into()]);
    operators.push(vec![
        "shift".into(),
        format!("{:.16e},{:.16e}", ops.shift.re, ops.shift.im).into(),
    ]);
    report.tables = vec![
        ("coefficients", coeffs),
        ("ratios", ratios),
        ("classification", class),
        ("operators", operators),
    ];
    report.csv_table = Some("coefficients");
    Ok(report)
}

pub fn landau(cfg: &RunConfig) -> Usage<Report> {
    for family in [
        DeformationFamily::gauss_lowering(cfg.alpha),
        DeformationFamily::gauss_raising(cfg.beta),
    ] {
        require_disk(family)?;
    }
    let warnings: Vec<String> = [
        DeformationFamily::gauss_lowering(cfg.alpha),
        DeformationFamily::gauss_raising(cfg.beta),
    ]
    .into_iter()
    .filter_map(boundary_warning)
    .collect();
    let model = LandauModel::new(cfg.dim, cfg.alpha, cfg.beta)?;
    let space = model.space();
    let margin = cfg.margin;
    let id = FockOperator::identity(space);
    let zero = FockOperator::zeros(space);
    let mut report = Report::new(meta(cfg, &warnings));
    let checks = &mut report.checks;

    let q = build_quadratures(space)?;
    let i_id = id.scale(C64::new(0.0, 1.0));
    let mut quad: f64 = 0.0;
    for (x, y, expected) in [
        (&q.q1, &q.p1, &i_id),
        (&q.q2, &q.p2, &i_id),
        (&q.q1, &q.p2, &zero),
        (&q.q2, &q.p1, &zero),
        (&q.q1, &q.q2, &zero),
        (&q.p1, &q.p2, &zero),
    ] {
        quad = quad.max(interior_defect(&x.commutator(y)?, expected, margin)?);
    }
    checks.push(CheckReport::at_most(
        "quadrature",
        quad,
        cfg.tol("quadrature"),
        "[Q_k,P_k] = i, all cross commutators vanish",
    ));

    let h1 = hamiltonian(space, 1)?;
    let h2 = hamiltonian(space, 2)?;
    let half = C64::new(0.5, 0.0);
    let from_quads = q.q1.compose(&q.q1)?.add(&q.p1.compose(&q.p1)?)?.scale(half);
    let ham = interior_defect(&h1.commutator(&h2)?, &zero, margin)?.max(interior_defect(&h1, &from_quads, margin)?);
    checks.push(CheckReport::at_most(
        "hamiltonian",
        ham,
        cfg.tol("hamiltonian"),
        "[H_1,H_2] = 0 and H_1 = (Q_1^2 + P_1^2)/2",
    ));
    for which in [1, 2] {
        checks.push(CheckReport::at_most(
            &format!("coordinate_form_h{which}"),
            coordinate_form_defect(&model, which, margin)?,
            cfg.tol("coordinate_form"),
            "B_k A_k + 1/2 equals its quadratic form in Q_k, P_k",
        ));
    }

    let n_max = cfg.nmax;
    let mut eig_phi: f64 = 0.0;
    let mut eig_psi: f64 = 0.0;
    for which in [1usize, 2] {
        let h = deformed_hamiltonian(&model, which)?;
        let hd = h.adjoint();
        for n in 0..=n_max {
            for m in 0..=n_max {
                let level = if which == 1 { n } else { m };
                let e = C64::new(level as f64 + 0.5, 0.0);
                let phi = model.phi_nm(n, m)?;
                let psi = model.psi_nm(n, m)?;
                eig_phi = eig_phi.max(h.apply(&phi)?.distance(&phi.scale(e))? / phi.norm());
                eig_psi = eig_psi.max(hd.apply(&psi)?.distance(&psi.scale(e))?);
            }
        }
    }
    checks.push(CheckReport::at_most(
        "eigen_phi",
        eig_phi,
        cfg.tol("eigen_phi"),
        "h_1 phi_nm = (n + 1/2) phi_nm and h_2 phi_nm = (m + 1/2) phi_nm, relative residual",
    ));
    checks.push(CheckReport::at_most(
        "eigen_psi",
        eig_psi,
        cfg.tol("eigen_psi"),
        "h_k^dag Psi_nm = (level + 1/2) Psi_nm",
    ));
    let two = two_index_family(&model, n_max, n_max)?;
    checks.push(CheckReport::at_most(
        "biorthonormality",
        two.max_pairing_defect(),
        cfg.tol("biorthonormality"),
        "<Psi_nm, phi_kl> = delta_nk delta_ml",
    ));

    let order = 12.min(cfg.dim - 2);
    let ce = single_index_counterexample(&model, order)?;
    checks.push(CheckReport::at_most(
        "counterexample",
        ce.max_overlap,
        cfg.tol("counterexample"),
        "f = Psi_10 - Psi_01 is orthogonal to every eta_n = Y^n phi_00 / sqrt(n!)",
    ));
    checks.push(CheckReport::at_least(
        "counterexample_norm",
        ce.f_norm,
        cfg.tol("counterexample_norm"),
        "f is far from zero, so the single-index family is incomplete",
    ));

    let mut overlaps = Table::new(&["n", "overlap"]);
    for (n, o) in ce.overlaps.iter().enumerate() {
        overlaps.push(vec![n.into(), (*o).into()]);
    }
    report.tables = vec![("counterexample", overlaps)];
    Ok(report)
}
