use std::collections::BTreeSet;

use proptest::prelude::*;

use toroidal_bosons::config::Overrides;
use toroidal_bosons::exactnum::QSqrt2;
use toroidal_bosons::fields::{operator_table, NodeField, TableVariant};
use toroidal_bosons::fock::{FockModel, FockState, HalfInt, Sector};
use toroidal_bosons::lattice::{build_type, Algebra};
use toroidal_bosons::verifier::{mode_form, Engine, OpExpr, Relation, RelationInstance, Sign, Status, SweepBounds};
use toroidal_bosons::Error;

fn algebra() -> impl Strategy<Value = (Algebra, usize)> {
    prop_oneof![
        (2usize..=4).prop_map(|n| (Algebra::A, n)),
        (2usize..=3).prop_map(|n| (Algebra::B, n)),
        (2usize..=3).prop_map(|n| (Algebra::C, n)),
        Just((Algebra::D, 4)),
    ]
}

fn sector() -> impl Strategy<Value = Sector> {
    prop_oneof![Just(Sector::Ns), Just(Sector::R)]
}

fn relation() -> impl Strategy<Value = Relation> {
    proptest::sample::select(Relation::ALL.to_vec())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn level_is_sector_independent((a, n) in algebra()) {
        let td = build_type(a, n).unwrap();
        let ns = Engine::new(&td, TableVariant::Systematic, Sector::Ns, FockModel::Irreducible).unwrap().determine_level();
        let r = Engine::new(&td, TableVariant::Systematic, Sector::R, FockModel::Irreducible).unwrap().determine_level();
        prop_assert!(ns.consistent);
        prop_assert_eq!(ns, r);
    }

    #[test]
    fn wrong_arity_is_rejected(rel in relation(), extra in 1usize..3) {
        let td = build_type(Algebra::A, 3).unwrap();
        let inst = RelationInstance { relation: rel, nodes: vec![0, 1], sign: Some(Sign::Plus), modes: vec![0; rel.arity() + extra] };
        let is_arity = matches!(mode_form(&td, &QSqrt2::zero(), &inst), Err(Error::Arity { .. }));
        prop_assert!(is_arity);
    }

    #[test]
    fn same_sign_fields_commute(
        (a, n) in algebra(), sec in sector(), node in 0usize..4, plus in any::<bool>(),
        m in -2i64..=2, k in -2i64..=2, pick in any::<prop::sample::Index>(),
    ) {
        let td = build_type(a, n).unwrap();
        let e = Engine::new(&td, TableVariant::Systematic, sec, FockModel::Irreducible).unwrap();
        let node = node % td.nodes();
        let kind = if plus { NodeField::XPlus } else { NodeField::XMinus };
        let states = e.space.enumerate_basis(HalfInt::from_int(1), 2);
        let s = pick.get(&states);
        let out = e.eval(&OpExpr::comm(OpExpr::field(node, kind, m), OpExpr::field(node, kind, k)), s).unwrap();
        prop_assert!(out.is_zero());
    }

    #[test]
    fn cartan_modes_obey_r1(
        (a, n) in algebra(), sec in sector(), i in 0usize..4, j in 0usize..4, m in -2i64..=2,
        pick in any::<prop::sample::Index>(),
    ) {
        let td = build_type(a, n).unwrap();
        let e = Engine::new(&td, TableVariant::Systematic, sec, FockModel::Irreducible).unwrap();
        let (i, j) = (i % td.nodes(), j % td.nodes());
        let lam = e.determine_level().global.unwrap();
        let states = e.space.enumerate_basis(HalfInt::from_int(1), 2);
        let inst = RelationInstance { relation: Relation::R1, nodes: vec![i, j], sign: None, modes: vec![m, -m] };
        prop_assert_eq!(e.verify_instance(&inst, &lam, pick.get(&states)).unwrap().status, Status::Pass);
    }

    #[test]
    fn flags_override_file_fieldwise(file_rank in 2usize..6, flag_rank in proptest::option::of(2usize..6), deg in 0i64..6) {
        let file = Overrides::from_toml(&format!("algebra = \"A\"\nrank = {file_rank}\nmax_degree = \"{deg}/2\"")).unwrap();
        let flags = Overrides { rank: flag_rank.map(|r| r.to_string()), ..Default::default() };
        let c = flags.over(file).resolve().unwrap();
        prop_assert_eq!(c.rank, flag_rank.unwrap_or(file_rank));
        prop_assert_eq!(c.max_degree.doubled(), deg);
    }
}

#[test]
fn suite_counts_tally_and_ignore_workers() {
    let td = build_type(Algebra::C, 2).unwrap();
    let e = Engine::new(&td, TableVariant::Systematic, Sector::R, FockModel::Irreducible).unwrap();
    let bounds = SweepBounds { max_degree: HalfInt::from_int(1), max_mode: 1, ..Default::default() };
    let all: BTreeSet<Relation> = Relation::ALL.into_iter().collect();
    let one = e.run_suite(&bounds, &all, 1);
    let four = e.run_suite(&bounds, &all, 4);
    assert_eq!(serde_json::to_string(&one).unwrap(), serde_json::to_string(&four).unwrap());
    let t = one.total();
    assert_eq!(t.instances, one.records.len());
    assert_eq!(t.passed, one.records.iter().filter(|r| r.status == Status::Pass).count());
    assert!(one.all_pass());
}

#[test]
fn sign_flip_is_caught_with_a_witness() {
    let td = build_type(Algebra::D, 4).unwrap();
    let mut t = operator_table(&td, TableVariant::Systematic);
    let flipped = t.nodes[2].x_plus.field().unwrap().scale(&QSqrt2::from_int(-1));
    t.nodes[2].x_plus = toroidal_bosons::fields::TableEntry::Field(flipped);
    let e = Engine::from_table(&td, t, Sector::Ns, FockModel::Irreducible).unwrap();
    let lam = QSqrt2::from_int(-2);
    let inst = RelationInstance { relation: Relation::R3, nodes: vec![2, 2], sign: None, modes: vec![1, -1] };
    let r = e.verify_instance(&inst, &lam, &FockState::vacuum()).unwrap();
    assert_eq!(r.status, Status::Fail);
    assert!(!r.witness.unwrap().is_zero());
}

#[test]
fn full_model_breaks_node_zero() {
    // Keeping the cbar oscillators spoils R1 at node 0 against itself.
    let td = build_type(Algebra::A, 3).unwrap();
    let e = Engine::new(&td, TableVariant::Systematic, Sector::Ns, FockModel::Full).unwrap();
    let bounds = SweepBounds { max_degree: HalfInt::from_int(1), max_mode: 1, ..Default::default() };
    let rels: BTreeSet<Relation> = [Relation::R1, Relation::R2].into_iter().collect();
    let rep = e.run_suite(&bounds, &rels, 1);
    assert!(rep.records.iter().any(|r| r.status == Status::Fail && r.instance.nodes.contains(&0)));
}
