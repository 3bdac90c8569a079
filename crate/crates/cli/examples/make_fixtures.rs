//! Regenerates the model files in `fixtures/` from fixed seeds.
//!
//! Run with `cargo run -p lrkit-cli --example make_fixtures -- fixtures`.

use std::path::PathBuf;
use std::sync::Arc;

use lrkit::algebroid::extract_structure;
use lrkit::geometry::{structure_from_geometry, GeometricModel, Splitting};
use lrkit::graded::{models, AlgebraElement, FreeModule};
use lrkit::random;
use lrkit::symtensor::{Derivation, SymElement, Word};
use lrkit_cli::schema::{carrier_sym, export_model, to_canonical_string, Caps, Model};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "fixtures".into()));
    std::fs::create_dir_all(&dir).expect("fixture directory");
    let write = |name: &str, model: Model, caps: Caps, description: &str| {
        let text = to_canonical_string(&export_model(&model, caps, Some(description.into())));
        std::fs::write(dir.join(name), text).expect("write fixture");
    };
    let rng = |seed| ChaCha8Rng::seed_from_u64(seed);
    let dual = Arc::new(models::twisted_dual_numbers());
    let dual_two = Arc::new(models::twisted_dual_numbers_two());
    let ef = Arc::new(models::exterior(&["e", "f"]));
    let geo = |cap| Caps { weight: cap, arity: cap };

    let g = GeometricModel::trivial(dual.clone(), 1, 1, 3).unwrap();
    write("trivial.model", Model::Geometry(g), geo(3), "flat embedding with standard splitting and no curvature");

    let eps = Arc::new(models::exterior(&["ε"]));
    let mut g = GeometricModel::trivial(eps, 1, 1, 3).unwrap();
    let sym = g.normal_sym();
    g.curvature_perp[0][0] = sym.word(Word::from_letters(vec![0, 0]), &AlgebraElement::basis(1));
    write("epsilon_nilpotent.model", Model::Geometry(g), geo(3), "normal curvature ε n∨n∨ with ε² = 0");

    let g = random::geometric_model(&mut rng(101), &dual, 1, 1, 3, 0.6).unwrap();
    write("curved_rank1.model", Model::Geometry(g), geo(3), "random consistent model, one tangent and one normal direction");

    let g = random::geometric_model(&mut rng(102), &ef, 2, 2, 3, 0.5).unwrap();
    write("curved_rank2.model", Model::Geometry(g), geo(3), "random consistent model, two tangent and two normal directions");

    let mut g = GeometricModel::trivial(dual.clone(), 1, 1, 3).unwrap();
    g.splitting = Splitting::sheared(&dual, 1, &[vec![AlgebraElement::basis(1)]]);
    g.beta = g.induced_beta().unwrap();
    g.beta_closed = true;
    write("sheared_splitting.model", Model::Geometry(g), geo(3), "splitting ρ(N0) = Y1 + x Y0 with induced β = −ex");

    let mut g = random::geometric_model(&mut rng(103), &ef, 2, 2, 3, 0.6).unwrap();
    g.splitting = Splitting::standard(&ef, 2, 2);
    g.beta = g.induced_beta().unwrap();
    for top in g.curvature_top.iter_mut().flatten() {
        *top = SymElement::zero(3);
    }
    write("diagonal.model", Model::Geometry(g), geo(3), "no shear and no tangent curvature: the Kapranov regime");

    let mut r = rng(104);
    let mut g = random::geometric_model(&mut r, &dual, 1, 2, 3, 0.6).unwrap();
    let frame = g.ambient_frame_sym();
    let full = (2..=3).map(|w| (0..3).map(|_| random::sym_element(&mut r, &frame, 1, w, w, 0.6)).collect()).collect();
    g.set_full_curvature(full).unwrap();
    write("full_curvature.model", Model::Geometry(g), geo(3), "ambient curvature given in the sheared frame");

    let g = random::geometric_model(&mut rng(105), &dual_two, 1, 2, 3, 0.7).unwrap();
    write("nonintegrable.model", Model::Geometry(g.clone()), geo(3), "random model whose 𝔇 does not square to zero");
    let s = structure_from_geometry(&g).unwrap();
    write("nonintegrable_algebroid.model", Model::Algebroid(s), geo(3), "the algebroid of the non-integrable model");

    let carrier = FreeModule::new(dual.clone(), vec![0, -1]).with_names(vec!["u".into(), "v".into()]).unwrap();
    let sym = carrier_sym(&carrier, 3);
    let d0 = Derivation::base_differential(&sym, &carrier).unwrap();
    let phi = random::unipotent(&mut rng(106), &sym, 0.5).unwrap();
    let d = phi.conjugate(&sym, &d0).unwrap();
    write(
        "conjugated.model",
        Model::Derivation { carrier: carrier.clone(), sym: sym.clone(), d: d.clone() },
        geo(3),
        "D₀ conjugated by a unipotent automorphism",
    );
    let s = extract_structure(&carrier, &sym, &d).unwrap();
    write("conjugated_algebroid.model", Model::Algebroid(s), geo(3), "the algebroid extracted from the conjugated differential");
}
