//! Random data of a degenerate case is classified, a solution of the normal
//! form is synthesized, and its image under the inverse normalizing map is
//! verified against the original data.

use affine_solitons::classify::{classify_default, random_case_instance, CaseTag, SolitonCase};
use affine_solitons::geometry::transform_curve;
use affine_solitons::io::{read_curve_csv, write_curve_csv};
use affine_solitons::synthesis::{synthesize, CurveFamily, Variant};
use affine_solitons::verify::{flow_residual, soliton_residual};

fn family_for(tag: CaseTag) -> Variant {
    match tag {
        CaseTag::Deg1a => Variant::Parabola { c1: 0.2, c2: 0.1 },
        CaseTag::Deg1b => Variant::ConvexWell { c1: 0.5, c2: 0.3 },
        CaseTag::Deg1c => Variant::Separatrix { eps: 0.2 },
        CaseTag::Deg1d => Variant::Periodic { c1: 0.8, c2: 0.0 },
        CaseTag::Deg1e => Variant::Trajectory { u0: 0.5, v0: -0.2 },
        CaseTag::Deg1f => Variant::Quintic { c1: -0.4, c2: 0.0 },
        CaseTag::Deg1g => Variant::Scooper { c1: 0.1, c2: -0.2 },
        _ => unreachable!(),
    }
}

#[test]
fn classify_synthesize_and_map_back() {
    for tag in CaseTag::ALL.into_iter().filter(|t| t.is_degenerate()) {
        for seed in 0..5 {
            let data = random_case_instance(&SolitonCase::plain(tag).unwrap(), 1000 + seed).unwrap();
            let report = classify_default(&data).unwrap();
            assert_eq!(report.case.tag, tag);
            let variant = family_for(tag);
            let family = CurveFamily::new(tag, variant, variant.default_window()).unwrap();
            let canonical_curve = synthesize(&family).unwrap();
            let back = report.map.inverse().unwrap();
            let curve = transform_curve(&canonical_curve, &back).unwrap();
            let r = soliton_residual(&curve, &data).unwrap();
            // the map changes the scale of the residual by a bounded factor
            assert!(
                r.sup_norm < 20.0 * family.tolerance(),
                "{tag} seed {seed}: {}",
                r.sup_norm
            );

            // and the same after a CSV round trip, without jets
            let mut buf = Vec::new();
            write_curve_csv(&curve, &mut buf).unwrap();
            let reread = read_curve_csv(buf.as_slice()).unwrap();
            assert_eq!(reread.points(), curve.points());
            let r = soliton_residual(&reread, &data).unwrap();
            assert!(r.sup_norm < 20.0 * 1e-5, "{tag} seed {seed} from CSV: {}", r.sup_norm);
        }
    }
}

#[test]
fn mapped_solutions_move_self_similarly() {
    for tag in [CaseTag::Deg1a, CaseTag::Deg1b, CaseTag::Deg1f] {
        let data = random_case_instance(&SolitonCase::plain(tag).unwrap(), 7).unwrap();
        let report = classify_default(&data).unwrap();
        let variant = family_for(tag);
        let family = CurveFamily::new(tag, variant, variant.default_window()).unwrap();
        let curve = transform_curve(&synthesize(&family).unwrap(), &report.map.inverse().unwrap()).unwrap();
        let times = [0.0, 0.1, 0.2, 0.3, 0.4];
        let r = flow_residual(&curve, &data, &times).unwrap();
        assert!(r.sup_norm < 1e-5, "{tag}: {}", r.sup_norm);
    }
}
