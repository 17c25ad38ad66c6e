"""From arithmetic sentences to trees and Kleene-Brouwer orders."""

from .sentence import (
    NoExtensionCertificate, PipelineReport, SentenceTree, descending_chain, explore_tree, find_branch,
    no_extension_certificate, run_pipeline, sentence_to_order, sentence_to_tree,
)

__all__ = [
    "NoExtensionCertificate", "PipelineReport", "SentenceTree", "descending_chain", "explore_tree", "find_branch",
    "no_extension_certificate", "run_pipeline", "sentence_to_order", "sentence_to_tree",
]
