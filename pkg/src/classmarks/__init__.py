"""Look-up service for analytico-synthetic classification schemes published
as linked data: classmark parsing, versioned concept resolution, stable URI
minting, and SKOS-style RDF over HTTP."""

__version__ = "0.1.0"
