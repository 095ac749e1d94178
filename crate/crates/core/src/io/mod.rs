//! File formats, DOT rendering and the random instance generator.

pub mod certificate;
pub mod document;
pub mod dot;
pub mod generate;

pub use certificate::{
    certificate_to_document, document_to_certificate, parse_certificate, parse_plan, plan_to_document,
    serialize_certificate, serialize_plan, CertificateDocument, PlanDocument,
};
pub use document::{
    parse_document, parse_instance, serialize_instance, InstanceDocument, ParseOptions, ParsedDocument,
    FORMAT_VERSION,
};
pub use dot::{candidate_dot, weighted_dot};
pub use generate::{generate_instance, GeneratorParams};
