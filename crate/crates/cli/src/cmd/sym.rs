use clap::{Args, Subcommand};
use symevac::symmetry::{
    apply_group_element, basis_vector, compose_field, compose_scalar_field, orbit_positions, parse_parameter_name,
    sam_displacement_field, stabilizer, subgroup_symbol, CoefficientSet, FieldOn4i, GroupElement, Irrep, Version,
};

use crate::error::CliError;

#[derive(Debug, Args)]
pub struct SymArgs {
    /// Fractional x of the orbit representative
    #[arg(long, default_value_t = 0.25, global = true)]
    x: f64,
    /// Fractional y of the orbit representative
    #[arg(long, default_value_t = 0.25, global = true)]
    y: f64,
    #[command(subcommand)]
    action: SymAction,
}

#[derive(Debug, Subcommand)]
enum SymAction {
    /// One table row, e.g. `basis tau4 vectorI`
    Basis { irrep: Irrep, version: Version },
    /// Linear combination, e.g. `compose A4=1 B4=1 C1=1`
    Compose { terms: Vec<String> },
    /// Verify g(row) = χ(g)·row for every row and element
    Check,
    /// Apply an element to a combination, e.g. `apply My A4=1 B4=1`
    Apply { element: GroupElement, terms: Vec<String> },
    /// The layout field with its stabilizer
    Sam {
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        a4: f64,
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        b4: f64,
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        c1: f64,
    },
}

fn parse_terms(terms: &[String]) -> Result<CoefficientSet<f64>, CliError> {
    let mut coeffs = CoefficientSet::default();
    for term in terms {
        let (name, value) = term
            .split_once('=')
            .ok_or_else(|| CliError::Config(format!("expected NAME=VALUE, got {term:?}")))?;
        let (irrep, version) = parse_parameter_name(name.trim())?;
        let value: f64 = value
            .trim()
            .parse()
            .map_err(|_| CliError::Config(format!("invalid coefficient {value:?}")))?;
        coeffs.set(irrep, version, coeffs.get(irrep, version) + value);
    }
    Ok(coeffs)
}

/// Vector rows and scalar rows do not mix in one field.
fn field_of(coeffs: &CoefficientSet<f64>) -> Result<FieldOn4i<f64>, CliError> {
    let nonzero = |scalar: bool| {
        coeffs
            .iter()
            .any(|(_, v, c)| (v == Version::Scalar) == scalar && c != 0.0)
    };
    match (nonzero(false), nonzero(true)) {
        (true, true) => Err(CliError::Config("cannot mix P terms with A, B, C terms".into())),
        (false, true) => Ok(compose_scalar_field(coeffs)),
        _ => Ok(compose_field(coeffs)),
    }
}

// `+ 0.0` turns a negative zero into a plain one.
fn show(v: f64) -> String {
    (v + 0.0).to_string()
}

fn print_field(field: &FieldOn4i<f64>, x: f64, y: f64) -> Result<(), CliError> {
    let orbit = orbit_positions(x, y)?;
    for (i, p) in orbit.positions.iter().enumerate() {
        let value = match field {
            FieldOn4i::Vector(v) => format!("{} {} {}", show(v[i][0]), show(v[i][1]), show(v[i][2])),
            FieldOn4i::Scalar(s) => show(s[i]),
        };
        println!("{} {} {} {} : {value}", i + 1, show(p[0]), show(p[1]), show(p[2]));
    }
    Ok(())
}

fn print_stabilizer(field: &FieldOn4i<f64>) {
    let stab = stabilizer(field);
    let labels: Vec<&str> = stab.iter().map(|g| g.label()).collect();
    println!("stabilizer: {{{}}} = {}", labels.join(", "), subgroup_symbol(&stab));
}

/// Count of law checks and the failures among them, in exact arithmetic.
pub fn law_checks() -> (usize, Vec<String>) {
    let mut total = 0;
    let mut failures = Vec::new();
    for irrep in Irrep::ALL {
        for version in Version::ALL {
            let row = basis_vector::<i64>(irrep, version);
            for g in GroupElement::ALL {
                total += 1;
                let chi = i64::from(irrep.character(g));
                if apply_group_element(g, &row) != row.scale(chi) {
                    failures.push(format!("{irrep} {version} under {g}"));
                }
            }
        }
    }
    (total, failures)
}

pub fn run(args: &SymArgs) -> Result<(), CliError> {
    match &args.action {
        SymAction::Basis { irrep, version } => {
            println!("# {irrep} {version} -> {}", irrep.destination_group());
            print_field(&basis_vector(*irrep, *version), args.x, args.y)
        }
        SymAction::Compose { terms } => {
            let field = field_of(&parse_terms(terms)?)?;
            print_field(&field, args.x, args.y)?;
            print_stabilizer(&field);
            Ok(())
        }
        SymAction::Check => {
            let (total, failures) = law_checks();
            for f in &failures {
                println!("FAIL {f}");
            }
            println!("{}/{total} checks passed", total - failures.len());
            if failures.is_empty() {
                Ok(())
            } else {
                Err(CliError::Check(format!("{} law checks failed", failures.len())))
            }
        }
        SymAction::Apply { element, terms } => {
            let field = apply_group_element(*element, &field_of(&parse_terms(terms)?)?);
            print_field(&field, args.x, args.y)
        }
        SymAction::Sam { a4, b4, c1 } => {
            let field = sam_displacement_field(*a4, *b4, *c1)?;
            print_field(&field, args.x, args.y)?;
            print_stabilizer(&field);
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_law_check_passes() {
        let (total, failures) = law_checks();
        assert_eq!(total, 64);
        assert!(failures.is_empty(), "{failures:?}");
    }

    #[test]
    fn terms_accumulate() {
        let c = parse_terms(&["A4=1".into(), "a4 = 0.5".into(), "C1=2".into()]).unwrap();
        assert_eq!(c.get(Irrep::Tau4, Version::VectorI), 1.5);
        assert_eq!(c.get(Irrep::Tau1, Version::VectorIII), 2.0);
        assert!(parse_terms(&["Q1=1".into()]).is_err());
        assert!(parse_terms(&["A1".into()]).is_err());
        let mixed = parse_terms(&["A1=1".into(), "P2=1".into()]).unwrap();
        assert!(field_of(&mixed).is_err());
        let scalar = parse_terms(&["P2=1".into()]).unwrap();
        assert!(!field_of(&scalar).unwrap().is_vector());
    }
}
