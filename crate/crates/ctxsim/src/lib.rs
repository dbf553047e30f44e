//! Document formats, the bundled Alessi case study, renderers, CLI and HTTP
//! service around [`ctxsim_core`].

use ctxsim_core::{ApplicationContext, Engine, Error, Ontology, SimilarityMatrix};
use rayon::prelude::*;

pub mod case_study;
pub mod cli;
pub mod format;
pub mod render;
pub mod server;

/// Instances a context can be queried with (those whose class has a start
/// path in the context), in id order.
pub fn matrix_ids(ontology: &Ontology, context: &ApplicationContext) -> Vec<String> {
    ontology
        .instances()
        .filter(|i| context.start_path_for(ontology, &i.class_name).is_some())
        .map(|i| i.id.clone())
        .collect()
}

/// Same result as [`Engine::similarity_matrix`], rows computed in parallel.
pub fn par_similarity_matrix<S: AsRef<str> + Sync>(
    engine: &Engine<'_>,
    context: &ApplicationContext,
    ids: &[S],
) -> Result<SimilarityMatrix, Error> {
    let rows = ids
        .par_iter()
        .map(|q| engine.similarity_row(context, q.as_ref(), ids))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(SimilarityMatrix::from_rows(
        ids.iter().map(|s| s.as_ref().to_string()).collect(),
        rows.into_iter().flatten().collect(),
    ))
}
