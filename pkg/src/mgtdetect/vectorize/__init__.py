"""Classifier inputs: TF-IDF, skip-gram embeddings, style features, ablation and projection."""

from .ablation import AblationError, AblationMap, intersection_ablation
from .featurizer import AUGMENTED, TOKEN_ONLY, Featurizer, FeaturizerSpec, fit_featurizer
from .projection import Projection, project_2d
from .style import POS_TAGS, STYLE_FEATURE_NAMES, StyleFeatures, pos_tag, style_features
from .tfidf import DocVector, TfidfConfig, TfidfModel, VocabularyError, fit_tfidf, transform_tfidf, vocabulary_terms
from .word2vec import EmbeddingTable, Word2VecConfig, doc_embedding, doc_embeddings, sgns_loss_grad, train_word2vec

__all__ = [
    "AblationError", "AblationMap", "intersection_ablation", "AUGMENTED", "TOKEN_ONLY", "Featurizer",
    "FeaturizerSpec", "fit_featurizer", "Projection", "project_2d", "POS_TAGS", "STYLE_FEATURE_NAMES",
    "StyleFeatures", "pos_tag", "style_features", "DocVector", "TfidfConfig", "TfidfModel", "VocabularyError",
    "fit_tfidf", "transform_tfidf", "vocabulary_terms", "EmbeddingTable", "Word2VecConfig", "doc_embedding",
    "doc_embeddings", "sgns_loss_grad", "train_word2vec",
]
