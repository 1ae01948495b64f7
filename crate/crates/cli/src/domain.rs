//! Domain spec strings: `kind[:key=value]...`.
//!
//! ```text
//! hypercube:n=3:bc=dirichlet   rectangle:bc=neumann   triangle:bc=neumann
//! torus   sphere   disk        ppd:b=1,1.00707,1.00866   ppd:a=1,1.007,1.008
//! ```
//!
//! `bc` defaults to dirichlet where it applies. For `ppd`, `b` gives the side
//! factors (sides `b_i pi`) and `a` the eigenvalue coefficients.

use std::collections::BTreeMap;

use nodal_core::{BoundaryCondition, Domain, DomainSpec};

pub fn parse(text: &str) -> Result<DomainSpec, String> {
    let mut parts = text.trim().split(':');
    let kind = parts.next().unwrap_or_default();
    let mut kv = BTreeMap::new();
    for p in parts {
        let (k, v) = p.split_once('=').ok_or_else(|| format!("expected key=value, got {p:?}"))?;
        if kv.insert(k.trim(), v.trim()).is_some() {
            return Err(format!("duplicate key {k:?}"));
        }
    }
    let mut take = |k: &str| kv.remove(k);
    let bc = |v: Option<&str>| match v.unwrap_or("dirichlet") {
        "dirichlet" | "d" => Ok(BoundaryCondition::Dirichlet),
        "neumann" | "n" => Ok(BoundaryCondition::Neumann),
        other => Err(format!("unknown boundary condition {other:?}")),
    };
    let spec = match kind {
        "hypercube" | "cube" => {
            let n = match take("n") {
                Some(v) => v.parse::<usize>().map_err(|e| format!("n: {e}"))?,
                None => 3,
            };
            DomainSpec::hypercube(n, bc(take("bc"))?)
        }
        "rectangle" => DomainSpec::rectangle(bc(take("bc"))?),
        "triangle" => DomainSpec::triangle(bc(take("bc"))?),
        "torus" => Ok(DomainSpec::torus()),
        "sphere" => Ok(DomainSpec::sphere()),
        "disk" => Ok(DomainSpec::disk()),
        "ppd" | "parallelepiped" => {
            let bcv = bc(take("bc"))?;
            match (take("a"), take("b")) {
                (Some(a), None) => DomainSpec::new(Domain::Parallelepiped { a: triple(a)? }, bcv),
                (None, Some(b)) => DomainSpec::parallelepiped_from_sides(triple(b)?, bcv),
                _ => return Err("ppd needs exactly one of a=... or b=...".into()),
            }
        }
        other => return Err(format!("unknown domain {other:?}")),
    }
    .map_err(|e| e.to_string())?;
    if let Some(k) = kv.keys().next() {
        return Err(format!("unknown key {k:?} for {kind}"));
    }
    Ok(spec)
}

fn triple(v: &str) -> Result<[f64; 3], String> {
    let xs: Vec<f64> = v
        .split(',')
        .map(|s| s.trim().parse::<f64>().map_err(|e| format!("{s:?}: {e}")))
        .collect::<Result<_, _>>()?;
    xs.try_into().map_err(|xs: Vec<f64>| format!("expected 3 values, got {}", xs.len()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use BoundaryCondition::*;

    #[test]
    fn grammar() {
        assert_eq!(parse("hypercube:n=3:bc=dirichlet").unwrap(), DomainSpec::hypercube(3, Dirichlet).unwrap());
        assert_eq!(parse("rectangle:bc=neumann").unwrap(), DomainSpec::rectangle(Neumann).unwrap());
        assert_eq!(parse("triangle:bc=neumann").unwrap(), DomainSpec::triangle(Neumann).unwrap());
        assert_eq!(parse("torus").unwrap(), DomainSpec::torus());
        assert_eq!(parse("sphere").unwrap(), DomainSpec::sphere());
        assert_eq!(parse("disk").unwrap(), DomainSpec::disk());
        let p = parse("ppd:b=1,1.00707,1.00866").unwrap();
        match p.domain {
            Domain::Parallelepiped { a } => assert!((a[1] - 1.0 / 1.00707f64.powi(2)).abs() < 1e-15),
            d => panic!("{d:?}"),
        }
        assert_eq!(
            parse("ppd:a=1,2,3").unwrap().domain,
            Domain::Parallelepiped { a: [1.0, 2.0, 3.0] }
        );
    }

    #[test]
    fn malformed() {
        for bad in [
            "",
            "klein",
            "hypercube:n=x",
            "hypercube:n=0",
            "rectangle:bc=robin",
            "torus:bc=dirichlet",
            "torus:x=1",
            "ppd",
            "ppd:b=1,2",
            "ppd:a=1,2,3:b=1,2,3",
            "rectangle:bc",
            "rectangle:bc=neumann:bc=neumann",
        ] {
            assert!(parse(bad).is_err(), "{bad:?}");
        }
    }
}
