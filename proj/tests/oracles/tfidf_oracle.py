# Copyright (c) 2026 The ouvls Authors. All Rights Reserved.
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


"""Reference TF-IDF values from scikit-learn for the features tests.

  python3 tests/oracles/tfidf_oracle.py
"""

import json
import pathlib

from sklearn.feature_extraction.text import TfidfVectorizer

DATA = pathlib.Path(__file__).resolve().parent.parent / "data"


def grams(tokens):
    return list(tokens) + [a + " " + b for a, b in zip(tokens, tokens[1:])]


def main():
    fixture = json.loads((DATA / "tfidf_fixture.json").read_text())
    vec = TfidfVectorizer(analyzer=grams, min_df=fixture["min_df"], norm="l2", smooth_idf=True, sublinear_tf=False)
    vec.fit(fixture["documents"])
    vocab = sorted(vec.vocabulary_, key=vec.vocabulary_.get)
    row = vec.transform([fixture["query"]]).tocoo()
    query = sorted(zip(row.col.tolist(), row.data.tolist()))
    golden = {
        "grams": vocab,
        "idf": vec.idf_.tolist(),
        "query_indices": [i for i, _ in query],
        "query_values": [v for _, v in query],
    }
    (DATA / "tfidf_golden.json").write_text(json.dumps(golden, indent=1) + "\n")


if __name__ == "__main__":
    main()
