#!/usr/bin/env python3
# Copyright 2026 The OpenIME Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#  http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Regenerates the toy fixture files in this directory.

The output is deterministic; rerunning it must leave the checked-in files
unchanged.
"""

import itertools
import os
import random

HERE = os.path.dirname(os.path.abspath(__file__))

# character -> pronunciations, most frequent first.
DICT = [
    ("我", "wo"), ("你", "ni"), ("尼", "ni"), ("他", "ta"), ("她", "ta"),
    ("它", "ta"), ("们", "men"), ("的", "de"), ("了", "le liao"),
    ("是", "shi"), ("时", "shi"), ("事", "shi"), ("世", "shi"), ("市", "shi"),
    ("师", "shi"), ("史", "shi"), ("十", "shi"), ("在", "zai"), ("再", "zai"),
    ("有", "you"), ("又", "you"), ("友", "you"), ("游", "you"), ("油", "you"),
    ("很", "hen"), ("好", "hao"), ("号", "hao"), ("不", "bu"), ("也", "ye"),
    ("都", "dou du"), ("去", "qu"), ("来", "lai"), ("看", "kan"),
    ("想", "xiang"), ("向", "xiang"), ("说", "shuo"), ("吃", "chi"),
    ("喝", "he"), ("和", "he huo"), ("吗", "ma"), ("妈", "ma"), ("北", "bei"),
    ("背", "bei"), ("被", "bei"), ("杯", "bei"), ("贝", "bei"), ("京", "jing"),
    ("景", "jing"), ("经", "jing"), ("静", "jing"), ("欢", "huan"),
    ("幻", "huan"), ("换", "huan"), ("迎", "ying"), ("影", "ying"),
    ("英", "ying"), ("电", "dian"), ("点", "dian"), ("店", "dian"),
    ("喜", "xi"), ("西", "xi"), ("习", "xi"), ("戏", "xi"), ("洗", "xi"),
    ("朋", "peng"), ("老", "lao"), ("学", "xue"), ("雪", "xue"),
    ("生", "sheng"), ("声", "sheng"), ("校", "xiao"), ("小", "xiao"),
    ("笑", "xiao"), ("间", "jian"), ("件", "jian"), ("见", "jian"),
    ("界", "jie"), ("姐", "jie"), ("今", "jin"), ("金", "jin"), ("天", "tian"),
    ("明", "ming"), ("名", "ming"), ("气", "qi"), ("起", "qi"),
    ("上", "shang"), ("海", "hai"), ("还", "hai huan"), ("中", "zhong"),
    ("国", "guo"), ("过", "guo"), ("工", "gong"), ("公", "gong"),
    ("作", "zuo"), ("做", "zuo"), ("司", "si"), ("思", "si"), ("知", "zhi"),
    ("道", "dao"), ("到", "dao"), ("问", "wen"), ("文", "wen"), ("题", "ti"),
    ("体", "ti"), ("手", "shou"), ("机", "ji"), ("几", "ji"), ("济", "ji"),
    ("技", "ji"), ("记", "ji"), ("城", "cheng"), ("成", "cheng"),
    ("历", "li"), ("里", "li"), ("化", "hua"), ("话", "hua"), ("音", "yin"),
    ("乐", "yue le"), ("月", "yue"), ("非", "fei"), ("飞", "fei"),
    ("常", "chang"), ("长", "chang zhang"), ("场", "chang"), ("现", "xian"),
    ("先", "xian"), ("这", "zhe"), ("个", "ge"), ("一", "yi"), ("以", "yi"),
    ("议", "yi"), ("意", "yi"), ("大", "da"), ("新", "xin"), ("心", "xin"),
    ("听", "ting"), ("家", "jia"), ("加", "jia"), ("饭", "fan"), ("发", "fa"),
    ("法", "fa"), ("展", "zhan"), ("站", "zhan"), ("战", "zhan"),
    ("政", "zheng"), ("正", "zheng"), ("府", "fu"), ("服", "fu"),
    ("会", "hui"), ("回", "hui"), ("报", "bao"), ("包", "bao"), ("宝", "bao"),
    ("告", "gao"), ("高", "gao"), ("科", "ke"), ("可", "ke"), ("课", "ke"),
    ("术", "shu"), ("书", "shu"), ("数", "shu"), ("玩", "wan"), ("完", "wan"),
    ("晚", "wan"), ("安", "an"), ("按", "an"), ("爱", "ai"), ("周", "zhou"),
    ("州", "zhou"), ("末", "mo"), ("莫", "mo"), ("睡", "shui"), ("水", "shui"),
    ("觉", "jiao jue"), ("叫", "jiao"), ("教", "jiao"), ("没", "mei"),
    ("美", "mei"), ("爸", "ba"), ("吧", "ba"), ("八", "ba"),
]

# Legal syllables beyond the ones the dictionary uses.
EXTRA_SYLLABLES = ["a", "ai", "an", "ang", "e", "er", "o", "ou", "zhuang",
                   "chuang", "shuang", "xiong", "jiong", "qiong", "lve", "nve"]

SUBJ = ["我", "你", "他", "我们", "你们", "他们", "老师", "学生", "妈妈",
        "爸爸", "朋友"]
PLACE = ["北京", "上海", "中国", "学校", "公司", "城市"]
OBJ = ["电影", "音乐", "手机", "文化", "历史", "学习", "工作"]
TIME = ["今天", "明天", "现在"]

TEMPLATES = [
    lambda: [[s, "很", "喜欢", o] for s in SUBJ for o in OBJ],
    lambda: [[s, "在", p, "工作"] for s in SUBJ for p in PLACE],
    lambda: [[s, "想", "去", p, "看", "电影"] for s in SUBJ for p in PLACE],
    lambda: [[t, p, "的", "天气", "很", "好"] for t in TIME for p in PLACE],
    lambda: [["欢迎", "你", "来", p] for p in PLACE],
    lambda: [[s, "和", "朋友", "去", p] for s in SUBJ[:6] for p in PLACE],
    lambda: [["这个", "电影", "的", "背景", "是", p] for p in PLACE],
    lambda: [[t, s, "没有", "时间"] for t in TIME for s in SUBJ[:6]],
    lambda: [["这个", "事件", "很", "大"], ["这个", "世界", "非常", "大"]],
    lambda: [[p, "是", "一个", "很", "大", "的", "城市"] for p in PLACE[:3]],
    lambda: [[s, "有", "一个", "新", "手机"] for s in SUBJ],
    lambda: [[s, "知道", "这个", "问题", "吗"] for s in SUBJ],
    lambda: [[s, "喝", "水"] for s in SUBJ[:6]],
    lambda: [[s, "喜欢", "听", "音乐"] for s in SUBJ],
    lambda: [["中国", "的", "历史", "和", "文化"], ["北京", "欢迎", "你"],
             ["这", "是", "一个", "幻影"], ["妈妈", "在", "家", "吃饭"]],
    lambda: [[s, "是", "我", "的", "朋友"] for s in ["他", "你", "老师"]],
    lambda: [[s, "们", "都", "是", "学生"] for s in ["我", "你", "他"]],
]

LEXICON = sorted(set(
    SUBJ + PLACE + OBJ + TIME +
    ["很", "喜欢", "在", "想", "去", "看", "的", "天气", "好", "欢迎", "你",
     "来", "和", "这个", "背景", "是", "没有", "时间", "事件", "大", "世界",
     "非常", "一个", "有", "新", "知道", "问题", "吗", "喝", "水", "听", "这",
     "幻影", "家", "吃饭", "们", "都"]))

P_WORDS = ["经济", "发展", "市场", "技术", "政府", "会议", "报告", "科学"]
T_WORDS = ["游戏", "好玩", "晚安", "加油", "宝贝", "可爱", "周末", "睡觉"]

P_TEMPLATES = [
    lambda: ["".join([a, "的", b, "说", c, "很", d])
             for a in ["政府", "公司", "老师"] for b in ["报告", "会议"]
             for c in ["经济", "市场", "技术", "科学"] for d in ["好", "大"]],
    lambda: ["".join([a, "发展", "非常", "好"]) for a in ["经济", "市场", "技术", "科学"]],
    lambda: ["".join([a, "的", b, "发展"]) for a in ["中国", "上海", "北京"]
             for b in ["经济", "市场", "技术", "科学"]],
    lambda: ["".join([a, "在", b, "说", c]) for a in ["政府", "老师", "他们"]
             for b in ["会议", "报告"] for c in ["经济", "技术"]],
]

T_TEMPLATES = [
    lambda: ["".join(["这个", "游戏", "很", "好玩"])],
    lambda: ["".join([a, "晚安"]) for a in ["宝贝", "朋友", "妈妈", "老师"]],
    lambda: ["".join([a, "很", "可爱"]) for a in ["宝贝", "你", "他", "这个游戏"]],
    lambda: ["".join(["周末", a, "想", b]) for a in ["我", "你", "我们", "他们"]
             for b in ["睡觉", "看电影", "玩游戏"]],
    lambda: ["".join(["加油", a]) for a in ["宝贝", "朋友", "我们", "学生"]],
    lambda: ["".join([a, "喜欢", b]) for a in ["我", "你", "宝贝"]
             for b in ["游戏", "睡觉", "周末"]],
    lambda: ["".join(["周末", "的", "游戏", "很", "好玩"]),
             "".join(["宝贝", "周末", "加油"])],
]


def write(name, lines):
    with open(os.path.join(HERE, name), "w", encoding="utf-8") as f:
        for line in lines:
            f.write(line + "\n")


def main():
    rng = random.Random(20190728)
    chars = {c for c, _ in DICT}
    assert len(chars) == len(DICT), "duplicate character in DICT"

    sentences = []
    for make in TEMPLATES:
        for words in make():
            sentences.append("".join(words))
    sentences = sorted(set(sentences))
    must = sorted({"".join(w) for make in TEMPLATES[6:9] + TEMPLATES[14:15]
                   for w in make()})
    rest = [s for s in sentences if s not in must]
    rng.shuffle(rest)
    general = must + rest[:200 - len(must)]
    rng.shuffle(general)
    assert len(general) == 200, len(general)

    def domain(templates, seed):
        r = random.Random(seed)
        lines = sorted(set(itertools.chain.from_iterable(t() for t in templates)))
        r.shuffle(lines)
        return lines

    p_lines = domain(P_TEMPLATES, 7)
    t_lines = domain(T_TEMPLATES, 11)
    for line in general + p_lines + t_lines + LEXICON + P_WORDS + T_WORDS:
        for ch in line:
            assert ch in chars, (ch, line)

    syllables = sorted({s for _, py in DICT for s in py.split()} | set(EXTRA_SYLLABLES))
    write("syllables.txt", syllables)
    write("char_pinyin.tsv", [f"{c}\t{py}" for c, py in DICT])
    write("lexicon.txt", LEXICON)
    write("general.txt", [s + "。" for s in general])
    write("domain_p.txt", [s + "。" for s in p_lines])
    write("domain_t.txt", [s + "。" for s in t_lines])
    print(f"chars={len(DICT)} syllables={len(syllables)} general={len(general)} "
          f"p={len(p_lines)} t={len(t_lines)} candidates={len(sentences)}")


if __name__ == "__main__":
    main()
