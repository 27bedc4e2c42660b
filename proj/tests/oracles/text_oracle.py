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

"""Independent reimplementation of the sentence and token rules.

Writes the golden files the C++ tests compare against:
  python3 tests/oracles/text_oracle.py
"""

import json
import pathlib
import re
import unicodedata

DATA = pathlib.Path(__file__).resolve().parent.parent / "data"

ABBREVIATIONS = {
    "st", "sts", "approx", "no", "nos", "nr", "mt", "mts", "ft", "dr", "mr", "mrs", "ms", "prof",
    "rev", "fr", "ca", "cf", "vs", "e.g", "i.e", "viz", "jr", "sr", "vol", "fig",
}
CLOSERS = ")]\"'’”»"
OPENERS = "([\"'‘“«"
TERMINATOR_RUN = re.compile("[.!?]+[" + re.escape(CLOSERS) + "]*")


def is_upper(ch):
    return unicodedata.category(ch) in ("Lu", "Lt")


def split_sentences(paragraph):
    out, start, pos = [], 0, 0
    while True:
        m = TERMINATOR_RUN.search(paragraph, pos)
        if not m:
            break
        run = re.match("[.!?]+", m.group(0)).group(0)
        rest = paragraph[m.end():]
        if rest.strip() == "":
            boundary = True
        else:
            after = re.match(r"\s+[" + re.escape(OPENERS) + "]*", rest)
            boundary = bool(after) and len(rest) > after.end() and is_upper(rest[after.end()])
        if boundary and run == ".":
            word = re.search(r"[A-Za-z.]+$", paragraph[: m.start()])
            if word and word.group(0).lower() in ABBREVIATIONS:
                boundary = False
        if boundary:
            piece = paragraph[start : m.end()].strip()
            if piece:
                out.append(piece)
            start = m.end()
        pos = m.end()
    tail = paragraph[start:].strip()
    if tail:
        out.append(tail)
    return out


QUOTES = {"‘": "'", "’": "'", "‛": "'", "′": "'",
          "“": '"', "”": '"', "„": '"', "″": '"'}
NUMBER = re.compile(r"\d(?:\d|[.,](?=\d))*")


def fold(text):
    text = unicodedata.normalize("NFD", text.lower())
    text = "".join(c for c in text if unicodedata.category(c) != "Mn")
    return "".join(QUOTES.get(c, c) for c in text)


def tokenize(sentence):
    s = fold(sentence)
    padded = []
    for i, c in enumerate(s):
        between_digits = 0 < i < len(s) - 1 and s[i - 1].isdigit() and s[i + 1].isdigit()
        if c in ".,;:!?()\"'" and not (c in ".," and between_digits):
            padded.append(" " + c + " ")
        else:
            padded.append(c)
    tokens = []
    for raw in "".join(padded).split():
        pieces = NUMBER.split(raw)
        numbers = NUMBER.findall(raw)
        for k, piece in enumerate(pieces):
            if piece:
                tokens.append(piece)
            if k < len(numbers):
                tokens.append("<num>")
    return tokens


def main():
    paragraphs = (DATA / "split_fixture.txt").read_text(encoding="utf-8").splitlines()
    golden = [{"paragraph": p, "sentences": split_sentences(p)} for p in paragraphs]
    (DATA / "split_golden.json").write_text(json.dumps(golden, ensure_ascii=False, indent=1) + "\n", encoding="utf-8")
    sentences = (DATA / "token_fixture.txt").read_text(encoding="utf-8").splitlines()
    golden = [{"sentence": s, "tokens": tokenize(s)} for s in sentences]
    (DATA / "token_golden.json").write_text(json.dumps(golden, ensure_ascii=False, indent=1) + "\n", encoding="utf-8")


if __name__ == "__main__":
    main()
