# Copyright 2026 The cmine Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Dictionary-based clinical concept mining."""

import json

from ._cmine import (
    CmineError,
    ClusterConfig,
    ConfigError,
    ConfigMismatchError,
    EncodingError,
    IndexFormatError,
    IoError,
    ParseError,
    PipelineConfig,
    UnsupportedError,
    VocabularyModel,
    build_masking_table,
    candidates,
    correct,
    load_knowledge_source,
    normalize,
    porter_stem,
    term_similarity,
    tokenize,
)
from ._cmine import Pipeline as _Pipeline

__all__ = [
    "CmineError",
    "ClusterConfig",
    "ConfigError",
    "ConfigMismatchError",
    "EncodingError",
    "IndexFormatError",
    "IoError",
    "ParseError",
    "Pipeline",
    "PipelineConfig",
    "UnsupportedError",
    "VocabularyModel",
    "build_masking_table",
    "candidates",
    "correct",
    "load_knowledge_source",
    "normalize",
    "porter_stem",
    "term_similarity",
    "tokenize",
]


class Pipeline:
    """An immutable annotator. Build from a knowledge source or load an index."""

    def __init__(self, native):
        self._native = native

    @classmethod
    def build(cls, kb, config=None, buckets="", stopwords="", triggers=""):
        return cls(_Pipeline.build(kb, config or PipelineConfig(), buckets, stopwords, triggers))

    @classmethod
    def from_records(cls, records, config=None, buckets=""):
        rows = [list(r) for r in records]
        return cls(_Pipeline.from_records(rows, config or PipelineConfig(), buckets))

    @classmethod
    def load(cls, index, config=None, buckets="", stopwords="", triggers=""):
        return cls(_Pipeline.load(index, config or PipelineConfig(), buckets, stopwords, triggers))

    def save(self, path):
        self._native.save(str(path))

    def annotate(self, text, document_id="", include_timing=True):
        """Returns the annotation of one document as a dict."""
        return json.loads(self._native.annotate_json(text, document_id, include_timing))

    def annotate_batch(self, documents, jobs=1, include_timing=True):
        """Annotates (id, text) pairs. Failed documents yield {"document_id", "error"}."""
        lines = self._native.annotate_batch_json(list(documents), jobs, include_timing)
        return [json.loads(line) for line in lines]

    @property
    def fingerprint(self):
        return self._native.fingerprint

    @property
    def node_count(self):
        return self._native.node_count

    @property
    def pattern_count(self):
        return self._native.pattern_count
