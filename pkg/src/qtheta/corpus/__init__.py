"""Shipped identity files and the verification harness."""

from .harness import (ERROR, FAIL, PASS, Corpus, CorpusEntry, Mismatch, VerificationReport,
                      check_decl, compare, default_corpus_dir, verify_all, verify_decls,
                      verify_entry)
from .mutate import mutations
