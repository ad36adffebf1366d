pub mod action;
pub mod corpus;
pub mod exec;
pub mod laws;
pub mod models;
pub mod predicates;
pub mod space;
pub mod syntax;
pub mod synthesis;
