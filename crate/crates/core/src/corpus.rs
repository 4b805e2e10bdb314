//! Small marked categories used by the gluing checks, the benches and the CLI.

use std::sync::Arc;

use crate::compactification::build_cpt;
use crate::fincat::{EdgeClass, FinCategory, Functor, MarkedCategory, NamedFunction};
use crate::poset::Poset;

#[derive(Debug, Clone)]
pub struct GluingInstance {
    pub name: &'static str,
    pub marked: MarkedCategory,
    /// Every morphism in `E1 ∩ E2` is at most this truncated.
    pub i_max: i32,
    pub target: Arc<FinCategory>,
    pub functor: Functor,
}

/// An instance whose hypotheses fail, with the hypothesis that should be reported.
#[derive(Debug, Clone)]
pub struct BrokenInstance {
    pub instance: GluingInstance,
    pub failing: &'static str,
}

/// Row edges (first coordinate fixed) go to `E2`, column edges to `E1`.
pub fn coordinate_classes(c: &Arc<FinCategory>, coords: impl Fn(usize) -> (usize, usize)) -> MarkedCategory {
    let e1 = EdgeClass::from_predicate(c, |f| coords(c.source(f)).1 == coords(c.target(f)).1);
    let e2 = EdgeClass::from_predicate(c, |f| coords(c.source(f)).0 == coords(c.target(f)).0);
    MarkedCategory::new(c.clone(), e1, e2)
}

fn identity_instance(name: &'static str, marked: MarkedCategory, i_max: i32) -> GluingInstance {
    let functor = Functor::identity(&marked.category);
    GluingInstance {
        name,
        target: marked.category.clone(),
        marked,
        i_max,
        functor,
    }
}

fn poset_category(p: Poset) -> Arc<FinCategory> {
    Arc::new(FinCategory::from_poset(Arc::new(p)))
}

fn grid_coords(p: &Poset) -> impl Fn(usize) -> (usize, usize) + '_ {
    |x| {
        let name = p.name(x).as_bytes();
        ((name[0] - b'0') as usize, (name[1] - b'0') as usize)
    }
}

/// Instances satisfying the hypotheses of both extension theorems.
pub fn good_instances() -> Vec<GluingInstance> {
    let mut out = Vec::new();

    let square = poset_category(Poset::grid(1, 1));
    let p = square.poset().expect("poset backend").clone();
    out.push(identity_instance(
        "square-coordinates",
        coordinate_classes(&square, grid_coords(&p)),
        -2,
    ));

    let wide = poset_category(Poset::grid(1, 2));
    let p = wide.poset().expect("poset backend").clone();
    out.push(identity_instance(
        "grid-1x2-coordinates",
        coordinate_classes(&wide, grid_coords(&p)),
        -2,
    ));

    let cpt = poset_category(build_cpt(2));
    let p = cpt.poset().expect("poset backend").clone();
    let coords = |x: usize| {
        let name = p.name(x).as_bytes();
        ((name[1] - b'0') as usize, (name[2] - b'0') as usize)
    };
    out.push(identity_instance("cpt2-coordinates", coordinate_classes(&cpt, coords), -2));

    // Every morphism of a poset is a monomorphism, so E1 ∩ E2 is (-1)-truncated.
    let chain = poset_category(Poset::chain(2));
    let all = MarkedCategory::new(chain.clone(), EdgeClass::all(&chain), EdgeClass::all(&chain));
    out.push(identity_instance("chain2-all", all, -1));

    // Factor through the identity: E2 = injections, E1 = all functions.
    let sets = Arc::new(FinCategory::finsets_of_sizes(&[0, 1, 2]));
    let inj = MarkedCategory::new(sets.clone(), EdgeClass::all(&sets), EdgeClass::injections(&sets));
    out.push(identity_instance("finset-injections", inj, -1));

    // Injections only, sent to the chain of cardinalities.
    let mono_sets = Arc::new(injection_category(&[0, 1, 2]));
    let sizes = poset_category(Poset::chain(2));
    let size = |x: usize| mono_sets.set_size(x).expect("finite set");
    let functor = Functor {
        objects: (0..mono_sets.num_objects()).map(size).collect(),
        morphisms: (0..mono_sets.num_morphisms())
            .map(|f| sizes.hom(size(mono_sets.source(f)), size(mono_sets.target(f)))[0])
            .collect(),
    };
    let mono = MarkedCategory::new(mono_sets.clone(), EdgeClass::all(&mono_sets), EdgeClass::all(&mono_sets));
    out.push(GluingInstance {
        name: "injections-to-sizes",
        marked: mono,
        i_max: -1,
        target: sizes,
        functor,
    });
    out
}

/// Finite sets of the given sizes with the injective functions between them.
pub fn injection_category(sizes: &[usize]) -> FinCategory {
    let sets = FinCategory::finsets_of_sizes(sizes);
    let injections = EdgeClass::injections(&sets);
    let functions: Vec<NamedFunction> = injections
        .members()
        .into_iter()
        .map(|f| {
            (
                sets.name(f).to_string(),
                sets.object_name(sets.source(f)).to_string(),
                sets.object_name(sets.target(f)).to_string(),
                sets.function_values(f).expect("finite sets").to_vec(),
            )
        })
        .collect();
    let objects: Vec<(String, Vec<String>)> = (0..sets.num_objects())
        .map(|x| {
            let n = sets.set_size(x).expect("finite set");
            (sets.object_name(x).to_string(), (0..n).map(|i| format!("e{i}")).collect())
        })
        .collect();
    FinCategory::finset_functions(&objects, Some(&functions)).expect("injections compose")
}

/// Instances with one hypothesis deliberately broken.
pub fn broken_instances() -> Vec<BrokenInstance> {
    let mut out = Vec::new();
    let edge = poset_category(Poset::chain(1));
    let ids = MarkedCategory::new(edge.clone(), EdgeClass::identities(&edge), EdgeClass::identities(&edge));
    out.push(BrokenInstance {
        instance: identity_instance("identities-only", ids, -2),
        failing: "factorization",
    });
    // 0 -> 2 pulled back along 1 -> 2 is 0 -> 1, which the class leaves out.
    let chain = poset_category(Poset::chain(2));
    let long = EdgeClass::from_predicate(&chain, |f| {
        chain.is_identity(f) || (chain.source(f), chain.target(f)) == (0, 2)
    });
    let unstable = MarkedCategory::new(chain.clone(), long, EdgeClass::all(&chain));
    out.push(BrokenInstance {
        instance: identity_instance("not-pullback-stable", unstable, -1),
        failing: "admissibility",
    });
    let chain = poset_category(Poset::chain(2));
    let all = MarkedCategory::new(chain.clone(), EdgeClass::all(&chain), EdgeClass::all(&chain));
    out.push(BrokenInstance {
        instance: identity_instance("truncation-bound-too-low", all, -2),
        failing: "truncation",
    });
    out
}
