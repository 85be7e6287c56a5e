use num_rational::Rational64;
use proptest::prelude::*;
use symevac::symmetry::{
    apply_group_element, compose_field, compose_scalar_field, orbit_positions, project_field, sam_displacement_field,
    stabilizer, CoefficientSet, FieldOn4i, GroupElement, Irrep, Version,
};

fn element() -> impl Strategy<Value = GroupElement> {
    prop::sample::select(GroupElement::ALL.to_vec())
}

fn coefficients() -> impl Strategy<Value = CoefficientSet<Rational64>> {
    prop::collection::vec((-20i64..=20, 1i64..=6), 16).prop_map(|v| {
        let mut c = CoefficientSet::default();
        for (k, (n, d)) in v.into_iter().enumerate() {
            c.set(Irrep::ALL[k / 4], Version::ALL[k % 4], Rational64::new(n, d));
        }
        c
    })
}

fn vector_part(c: &CoefficientSet<Rational64>) -> CoefficientSet<Rational64> {
    let mut out = *c;
    for i in Irrep::ALL {
        out.set(i, Version::Scalar, Rational64::from(0));
    }
    out
}

proptest! {
    #[test]
    fn projection_recovers_coefficients(c in coefficients()) {
        let vectors = vector_part(&c);
        prop_assert_eq!(project_field(&compose_field(&vectors)), vectors);
        let scalars = project_field(&compose_scalar_field(&c));
        for i in Irrep::ALL {
            prop_assert_eq!(scalars.get(i, Version::Scalar), c.get(i, Version::Scalar));
        }
    }

    #[test]
    fn action_is_a_homomorphism(c in coefficients(), g in element(), h in element()) {
        for f in [compose_field(&c), compose_scalar_field(&c)] {
            let stepwise = apply_group_element(g, &apply_group_element(h, &f));
            prop_assert_eq!(stepwise, apply_group_element(g.compose(h), &f));
            prop_assert_eq!(apply_group_element(g.inverse(), &apply_group_element(g, &f)), f);
        }
    }

    #[test]
    fn each_irrep_component_transforms_by_its_character(c in coefficients(), g in element()) {
        let f = compose_field(&c);
        let moved = project_field(&apply_group_element(g, &f));
        let before = project_field(&f);
        for i in Irrep::ALL {
            for v in Version::VECTORS {
                let chi = Rational64::from(i64::from(i.character(g)));
                prop_assert_eq!(moved.get(i, v), before.get(i, v) * chi);
            }
        }
    }

    #[test]
    fn sam_field_keeps_the_mirror(a in -9i64..=9, b in -9i64..=9, c in 0i64..=9) {
        let f = sam_displacement_field(a, b, c).unwrap();
        prop_assert!(stabilizer(&f).contains(&GroupElement::My));
        prop_assert!(f.is_vector());
    }

    #[test]
    fn orbit_is_closed(xn in 0i64..12, yn in 0i64..12, g in element()) {
        let (x, y) = (Rational64::new(xn, 12), Rational64::new(yn, 12));
        let orbit = orbit_positions(x, y).unwrap();
        let perm = g.permutation();
        for (i, p) in orbit.positions.iter().enumerate() {
            prop_assert_eq!(g.act_on_position(*p), orbit.positions[perm[i]]);
        }
    }
}

#[test]
fn stabilizers_of_single_rows_name_the_destination_group() {
    for irrep in Irrep::ALL {
        for version in Version::ALL {
            let f: FieldOn4i<i64> = symevac::symmetry::basis_vector(irrep, version);
            let stab = stabilizer(&f);
            assert_eq!(symevac::symmetry::subgroup_symbol(&stab), irrep.destination_group());
        }
    }
}
