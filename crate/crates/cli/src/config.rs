//! Config resolution: key=value files merged with command-line overrides.
//!
//! Flags win over file entries. The resolved configuration is echoed into
//! the manifest as the same key=value pairs, so a manifest can be replayed
//! as a config file; floats are printed with Rust's shortest round-trip
//! representation and parse back bit-identically.

use std::collections::BTreeMap;
use std::path::Path;

use westervelt::{InitialProfile, IntegratorKind, ModelParams, NewtonConfig, SimulationConfig};

use crate::RunArgs;

#[derive(Debug)]
pub struct Resolved {
    pub simulation: SimulationConfig,
    pub levels: usize,
    /// Resolved settings as config-file key=value pairs.
    pub echo: BTreeMap<String, String>,
}

pub fn resolve(args: &RunArgs) -> Result<Resolved, String> {
    let mut file = BTreeMap::new();
    if let Some(path) = &args.config {
        file = parse_config_file(path)?;
    }

    let take = |key: &str| file.get(key).cloned();

    let domain_text = args.domain.clone().or_else(|| take("domain"));
    let elements = match args.elements {
        Some(v) => Some(v),
        None => parse_opt(take("elements"), "elements")?,
    };
    let degree = match args.degree_k {
        Some(v) => Some(v),
        None => parse_opt(take("degree_k"), "degree_k")?,
    };
    let order = match args.order_q {
        Some(v) => Some(v),
        None => parse_opt(take("order_q"), "order_q")?,
    };
    let tau = match args.tau {
        Some(v) => Some(v),
        None => parse_opt(take("tau"), "tau")?,
    };
    let t_final = match args.t_final {
        Some(v) => Some(v),
        None => parse_opt(take("t_final"), "t_final")?,
    };
    let alpha = match args.alpha {
        Some(v) => Some(v),
        None => parse_opt(take("alpha"), "alpha")?,
    };
    let beta = match args.beta {
        Some(v) => Some(v),
        None => parse_opt(take("beta"), "beta")?,
    };
    let levels = match args.levels {
        Some(v) => Some(v),
        None => parse_opt(take("levels"), "levels")?,
    };

    let (psi0_text, p0_text) = match &args.initial {
        Some(pair) => {
            let (a, b) = pair
                .split_once(',')
                .ok_or_else(|| format!("--initial expects \"PSI0,P0\", got {pair:?}"))?;
            (Some(a.trim().to_string()), Some(b.trim().to_string()))
        }
        None => (take("psi0"), take("p0")),
    };

    let snapshots_text = args.snapshots.clone().or_else(|| take("snapshots"));
    let integrator_text = args.integrator.clone().or_else(|| take("integrator"));

    // Required settings have no defaults.
    let domain_text = domain_text.ok_or("missing domain (flag --domain or config key)")?;
    let domain = parse_domain(&domain_text)?;
    let num_elements = elements.ok_or("missing elements (flag --elements or config key)")?;
    let tau = tau.ok_or("missing tau (flag --tau or config key)")?;
    let t_final = t_final.ok_or("missing t_final (flag --t-final or config key)")?;

    let degree = degree.unwrap_or(1);
    let order = order.unwrap_or(1);
    let alpha = alpha.unwrap_or(0.0);
    let beta = beta.unwrap_or(0.0);
    let psi0 = match psi0_text {
        Some(text) => InitialProfile::parse(&text).map_err(|e| e.to_string())?,
        None => InitialProfile::Zero,
    };
    let p0 = match p0_text {
        Some(text) => InitialProfile::parse(&text).map_err(|e| e.to_string())?,
        None => InitialProfile::Zero,
    };
    let snapshot_times = match &snapshots_text {
        Some(text) => parse_float_list(text)?,
        None => Vec::new(),
    };
    let integrator = match &integrator_text {
        Some(text) => IntegratorKind::parse(text).map_err(|e| e.to_string())?,
        None => IntegratorKind::Cpg,
    };
    let levels = levels.unwrap_or(4);

    let params = ModelParams::new(alpha, beta).map_err(|e| e.to_string())?;
    let simulation = SimulationConfig {
        domain,
        num_elements,
        degree,
        order,
        t_final,
        tau,
        params,
        psi0,
        p0,
        snapshot_times,
        integrator,
        newton: NewtonConfig::default(),
    };
    simulation.validate().map_err(|e| e.to_string())?;

    let mut echo = BTreeMap::new();
    echo.insert("domain".into(), format!("{},{}", domain.0, domain.1));
    echo.insert("elements".into(), num_elements.to_string());
    echo.insert("degree_k".into(), degree.to_string());
    echo.insert("order_q".into(), order.to_string());
    echo.insert("tau".into(), tau.to_string());
    echo.insert("t_final".into(), t_final.to_string());
    echo.insert("alpha".into(), alpha.to_string());
    echo.insert("beta".into(), beta.to_string());
    echo.insert("psi0".into(), simulation.psi0.to_string());
    echo.insert("p0".into(), simulation.p0.to_string());
    echo.insert(
        "snapshots".into(),
        simulation
            .snapshot_times
            .iter()
            .map(|t| t.to_string())
            .collect::<Vec<_>>()
            .join(","),
    );
    echo.insert("integrator".into(), integrator.name().into());

    Ok(Resolved {
        simulation,
        levels,
        echo,
    })
}

fn parse_config_file(path: &Path) -> Result<BTreeMap<String, String>, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
    let mut map = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| format!("{}:{}: expected key = value", path.display(), lineno + 1))?;
        map.insert(key.trim().to_string(), value.trim().to_string());
    }
    Ok(map)
}

fn parse_opt<T: std::str::FromStr>(text: Option<String>, key: &str) -> Result<Option<T>, String> {
    match text {
        None => Ok(None),
        Some(t) => t
            .parse()
            .map(Some)
            .map_err(|_| format!("bad value for {key}: {t:?}")),
    }
}

fn parse_domain(text: &str) -> Result<(f64, f64), String> {
    let (a, b) = text
        .split_once(',')
        .ok_or_else(|| format!("domain expects \"a,b\", got {text:?}"))?;
    let a: f64 = a.trim().parse().map_err(|_| format!("bad domain start {a:?}"))?;
    let b: f64 = b.trim().parse().map_err(|_| format!("bad domain end {b:?}"))?;
    Ok((a, b))
}

fn parse_float_list(text: &str) -> Result<Vec<f64>, String> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    text.split(',')
        .map(|t| {
            t.trim()
                .parse()
                .map_err(|_| format!("bad number in list: {t:?}"))
        })
        .collect()
}
