#!/usr/bin/env python3
# Copyright 2026 The ecforge Authors.
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
"""Regenerates the toy corpus and causal pool under data/toy."""

import json
import pathlib
import random

OUT = pathlib.Path(__file__).resolve().parent.parent / "data" / "toy"

# (clauses, pairs, emotion)
DOCS = [
    (["Last night the power went out", "and the house went dark",
      "Mara was terrified", "because she heard footsteps upstairs"],
     [(3, 4)], "fear"),
    (["The report came back clean", "so Dev felt happy",
      "and called his sister"], [(2, 1)], "happiness"),
    (["Our dog died on Sunday", "the kids cried all evening",
      "I am still sad about it"], [(2, 1), (3, 1)], "sadness"),
    (["The landlord raised the rent again", "without any notice",
      "Tom was furious"], [(3, 1)], "anger"),
    (["She opened the fridge", "the milk had gone sour",
      "she was disgusted by the smell"], [(3, 2)], "disgust"),
    (["A letter arrived from an old friend", "Lena was surprised",
      "she had not heard from him in years"], [(2, 1)], "surprise"),
    (["The exam results were posted", "Priya passed every subject",
      "she was delighted", "and her parents were proud"],
     [(3, 2)], "happiness"),
    (["The bus never came", "I waited for an hour in the rain",
      "I got angry at the driver", "when he finally showed up"],
     [(3, 1), (3, 2)], "anger"),
    (["The storm knocked down the old oak", "it crushed our fence",
      "my father was upset", "because he planted that tree"],
     [(3, 4), (3, 2)], "sadness"),
    (["Someone left rotten fish in the office bin", "everyone felt sick",
      "we opened all the windows"], [(2, 1)], "disgust"),
    (["The dentist said I needed surgery", "I felt afraid",
      "my hands were shaking"], [(2, 1)], "fear"),
    (["He won the lottery", "he was shocked",
      "and could not speak for a minute"], [(2, 1)], "surprise"),
    (["My brother broke my laptop", "and lied about it", "I was angry",
      "and refused to talk to him"], [(3, 1), (3, 2)], "anger"),
    (["The wedding was beautiful", "Grandma smiled all day",
      "she was so glad", "that the family was together"],
     [(3, 4)], "happiness"),
    (["The museum lost my grandfather's painting", "we were heartbroken",
      "it was the only thing left of him"], [(2, 1), (2, 3)], "sadness"),
    (["A snake slid out of the drain", "Ari screamed",
      "he was scared of snakes since childhood"], [(3, 1)], "fear"),
    (["The team surprised me with a party", "I was astonished",
      "nobody had said a word"], [(2, 1)], "surprise"),
    (["The restaurant served us a hair in the soup", "I was disgusted",
      "and we left without paying"], [(2, 1)], "disgust"),
    (["The plant finally bloomed", "after three winters", "Ines felt joy",
      "and took a photo"], [(3, 1)], "happiness"),
    (["The neighbours played music until four", "I could not sleep",
      "so in the morning I was annoyed", "and knocked on their door"],
     [(3, 1), (3, 2)], "anger"),
    # test documents
    (["The ferry was cancelled", "we missed the funeral",
      "my mother was devastated"], [(3, 2)], "sadness"),
    (["The car in front braked suddenly", "I was frightened",
      "but nobody was hurt"], [(2, 1)], "fear"),
    (["Sam got the job", "he felt thrilled", "and bought cake for everyone"],
     [(2, 1)], "happiness"),
    (["They cancelled my flight twice", "the airline blamed the weather",
      "I was outraged", "because the sky was clear"],
     [(3, 1), (3, 4)], "anger"),
    (["The cat brought a dead rat inside", "Nadia felt sick",
      "and cleaned the floor twice"], [(2, 1)], "disgust"),
    (["My old teacher knocked on the door", "I was amazed",
      "she remembered my name"], [(2, 1), (2, 3)], "surprise"),
    (["The shop closed after forty years", "the owner cried",
      "customers were sad to see it go"], [(2, 1), (3, 1)], "sadness"),
    (["A stranger followed me home", "I felt scared",
      "and called the police"], [(2, 1)], "fear"),
    (["We finished the marathon", "my legs hurt",
      "but I was overjoyed"], [(3, 1)], "happiness"),
    (["The printer jammed again", "right before the deadline",
      "Joel lost his temper"], [(3, 1), (3, 2)], "anger"),
]

TRAIN_COUNT = 20

CAUSAL_TOPICS = [
    ("heavy rain", "the river flooded"), ("the frost", "the pipes burst"),
    ("skipping breakfast", "she felt dizzy"), ("the power cut", "the food spoiled"),
    ("a missed alarm", "he was late for work"), ("the drought", "crops failed"),
    ("a loose wire", "the lamp flickered"), ("the long queue", "customers left"),
    ("a flat tyre", "the trip was delayed"), ("the new road", "traffic improved"),
    ("a kind word", "the child stopped crying"), ("extra practice", "the team won"),
    ("a cracked screen", "the phone stopped working"),
    ("the price rise", "sales dropped"), ("a late train", "the meeting started late"),
    ("a strong wind", "the sign fell"), ("too much salt", "the soup was ruined"),
    ("the heatwave", "the ice cream melted"), ("a wrong turn", "they got lost"),
    ("a surprise gift", "she smiled"),
]

CAUSAL_TASKS = [
    ("cause-effect", "Identify the cause in this sentence: {a} meant that {b}.",
     "{a}"),
    ("effect-id", "What was the effect of {a}? Context: because of {a}, {b}.",
     "{b}"),
    ("causal-yn", "Does {a} cause {b}? Answer yes or no.", "yes"),
    ("explain", "Explain why {b}.", "Because of {a}."),
]


def doc_record(i, doc):
    clauses, pairs, emotion = doc
    return {"doc_id": f"toy-{i:03d}", "clauses": clauses,
            "pairs": [list(p) for p in pairs], "emotion": emotion}


def write_jsonl(path, records):
    with open(path, "w", encoding="utf-8") as f:
        for r in records:
            f.write(json.dumps(r, ensure_ascii=False) + "\n")


def main():
    records = [doc_record(i + 1, d) for i, d in enumerate(DOCS)]
    write_jsonl(OUT / "train.jsonl", records[:TRAIN_COUNT])
    write_jsonl(OUT / "test.jsonl", records[TRAIN_COUNT:])

    rng = random.Random(7)
    pool = []
    for n in range(200):
        a, b = CAUSAL_TOPICS[n % len(CAUSAL_TOPICS)]
        tag, instr, resp = CAUSAL_TASKS[rng.randrange(len(CAUSAL_TASKS))]
        pool.append({"causal_id": f"c{n:04d}",
                     "instruction": instr.format(a=a, b=b),
                     "response": resp.format(a=a, b=b),
                     "task_tag": tag})
    write_jsonl(OUT / "causal_pool.jsonl", pool)


if __name__ == "__main__":
    main()
