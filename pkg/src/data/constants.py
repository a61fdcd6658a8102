PAD_TOKEN = "<pad>"
UNK_TOKEN = "<unk>"
BOS_TOKEN = "<bos>"
EOS_TOKEN = "<eos>"
SEP_TOKEN = "<sep>"
PEOS_TOKEN = "<peos>"
DIGIT_TOKEN = "<digit>"

# Fixed order, the index of a special is its id in every vocabulary
SPECIAL_TOKENS = (PAD_TOKEN, UNK_TOKEN, BOS_TOKEN, EOS_TOKEN, SEP_TOKEN, PEOS_TOKEN, DIGIT_TOKEN)

# Abbreviations kept as a single token and never treated as sentence ends
ABBREVIATIONS = ("e.g.", "i.e.")
SENTENCE_END = "."

DEFAULT_VOCAB_SIZE = 50000
MAX_SOURCE_LENGTH = 400

KEYPHRASE_DELIMITER = ";"

VOCAB_FORMAT_VERSION = 1
