//! Frozen oracle values for (relative) multipliers and cohomology.
//!
//! The absolute values (Γ = 1) are classical Schur multipliers and
//! cohomology orders of small groups; the relative values for
//! surjective maps were computed independently from K/[K,Γ] by hand.

use relext_core::abgrp::AbGroup;
use relext_core::bar::{cohomology, homology, relative_complex, universal_coefficients};
use relext_core::grp::{
    alternating_group, cyclic_group, dihedral_group, direct_product, hom_from_generator_images,
    klein_four_group, quaternion_group, quotient, symmetric_group, trivial_group,
    generated_subgroup, Group, Hom,
};
use relext_core::Config;

fn cfg() -> Config {
    Config::default()
}

fn absolute_h2(g: &Group) -> Vec<u64> {
    let f = Hom::trivial(&trivial_group(), g);
    let c = relative_complex(&f, &cfg()).unwrap();
    homology(&c, 2).unwrap().group.invariant_factors().to_vec()
}

#[test]
fn schur_multipliers_of_small_groups() {
    let empty: &[u64] = &[];
    for n in [2usize, 3, 4, 5, 6, 8] {
        assert_eq!(absolute_h2(&cyclic_group(n)), empty, "H2 of the cyclic group C{n}");
    }
    assert_eq!(absolute_h2(&klein_four_group()), &[2]);
    assert_eq!(absolute_h2(&quaternion_group()), empty);
    assert_eq!(absolute_h2(&dihedral_group(4)), &[2]);
    assert_eq!(absolute_h2(&dihedral_group(5)), empty);
    assert_eq!(absolute_h2(&dihedral_group(6)), &[2]);
    assert_eq!(absolute_h2(&symmetric_group(3, &cfg()).unwrap()), empty);
    assert_eq!(absolute_h2(&alternating_group(4, &cfg()).unwrap()), &[2]);
    assert_eq!(
        absolute_h2(&direct_product(&cyclic_group(2), &cyclic_group(4))),
        &[2]
    );
    assert_eq!(
        absolute_h2(&direct_product(&cyclic_group(3), &cyclic_group(3))),
        &[3]
    );
}

#[test]
fn relative_multipliers_of_surjections() {
    // Z/8 → Z/2: kernel Z/4 with trivial commutators
    let f = hom_from_generator_images(&cyclic_group(8), &cyclic_group(2), &[1], &[1], &cfg())
        .unwrap();
    let c = relative_complex(&f, &cfg()).unwrap();
    assert_eq!(homology(&c, 2).unwrap().group.invariant_factors(), &[4]);

    // Q8 → Z/2 (quotient by <i>): kernel Z/4 = <i>, [K, Q8] = {±1}
    let q8 = quaternion_group();
    let (quo, proj) = quotient(&q8, &generated_subgroup(&q8, &[2])).unwrap();
    assert_eq!(quo.order(), 2);
    let f = Hom::new(q8, quo, proj.image_table().to_vec(), &cfg()).unwrap();
    let c = relative_complex(&f, &cfg()).unwrap();
    assert_eq!(homology(&c, 2).unwrap().group.invariant_factors(), &[2]);

    // S4 → S3 (quotient by the Klein four normal subgroup): the kernel
    // V meets [V, S4] = V, so the relative multiplier is trivial
    let s4 = symmetric_group(4, &cfg()).unwrap();
    let vsub = relext_core::grp::normal_subgroups(&s4, &cfg())
        .unwrap()
        .into_iter()
        .find(|n| n.order() == 4)
        .expect("the Klein four normal subgroup of S4");
    let (quo, proj) = quotient(&s4, &vsub).unwrap();
    assert_eq!(quo.order(), 6);
    let f = Hom::new(s4, quo, proj.image_table().to_vec(), &cfg()).unwrap();
    let c = relative_complex(&f, &cfg()).unwrap();
    assert!(homology(&c, 2).unwrap().group.is_trivial());
}

#[test]
fn cohomology_of_cyclic_groups_is_gcd() {
    for n in [2usize, 3, 4, 6] {
        let f = Hom::trivial(&trivial_group(), &cyclic_group(n));
        let c = relative_complex(&f, &cfg()).unwrap();
        for m in [2u64, 3, 4, 5, 6] {
            let h2 = cohomology(&c, &AbGroup::cyclic(m)).unwrap();
            let g = relext_core::abgrp::gcd(n as u64, m);
            assert_eq!(h2.group.order(), g as u128, "|H2(C{n}; Z/{m})|");
        }
    }
}

#[test]
fn cohomology_of_klein_four() {
    let f = Hom::trivial(&trivial_group(), &klein_four_group());
    let c = relative_complex(&f, &cfg()).unwrap();
    // H^2(V4; Z/2) has F2-dimension 3
    let h2 = cohomology(&c, &AbGroup::cyclic(2)).unwrap();
    assert_eq!(h2.group.order(), 8);
    // with Z/3 coefficients everything vanishes
    let h2 = cohomology(&c, &AbGroup::cyclic(3)).unwrap();
    assert!(h2.group.is_trivial());
}

#[test]
fn universal_coefficients_on_fixtures() {
    let groups: Vec<Group> = vec![
        cyclic_group(4),
        klein_four_group(),
        symmetric_group(3, &cfg()).unwrap(),
        dihedral_group(4),
    ];
    let coeffs = [
        AbGroup::cyclic(2),
        AbGroup::cyclic(4),
        AbGroup::cyclic(6),
        AbGroup::from_invariant_factors(vec![2, 2]).unwrap(),
    ];
    for g in &groups {
        let f = Hom::trivial(&trivial_group(), g);
        let c = relative_complex(&f, &cfg()).unwrap();
        for a in &coeffs {
            let report = universal_coefficients(&c, a).unwrap();
            assert!(report.exact, "universal coefficients failed on a fixture");
            assert_eq!(
                report.h2.order(),
                report.ext.order() * report.hom.order()
            );
        }
    }
}

#[test]
fn relative_h2_of_identity_vanishes() {
    for g in [cyclic_group(6), dihedral_group(4), quaternion_group()] {
        let f = Hom::identity(&g);
        let c = relative_complex(&f, &cfg()).unwrap();
        assert!(homology(&c, 2).unwrap().group.is_trivial());
        assert!(homology(&c, 1).unwrap().group.is_trivial());
    }
}
