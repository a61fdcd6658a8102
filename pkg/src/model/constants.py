from ..data.constants import BOS_TOKEN, EOS_TOKEN, PAD_TOKEN, PEOS_TOKEN, SEP_TOKEN, SPECIAL_TOKENS, UNK_TOKEN

PAD_ID = SPECIAL_TOKENS.index(PAD_TOKEN)
UNK_ID = SPECIAL_TOKENS.index(UNK_TOKEN)
BOS_ID = SPECIAL_TOKENS.index(BOS_TOKEN)
EOS_ID = SPECIAL_TOKENS.index(EOS_TOKEN)
SEP_ID = SPECIAL_TOKENS.index(SEP_TOKEN)
PEOS_ID = SPECIAL_TOKENS.index(PEOS_TOKEN)

EMBED_DIM = 300
HIDDEN_DIM = 300
CNN_KERNEL_SIZES = (1, 3, 5)
CNN_CHANNELS = 100
SELECTOR_MLP_HIDDEN = 100
SIGNIFICANCE_EMBED_DIM = 300

# A sentence is significant when its probability is strictly above the threshold
GATE_THRESHOLD = 0.5

MAX_DECODE_LENGTH = 60

ENCODER_TYPES = ("gru", "lstm")
SELECTOR_INPUTS = ("embedding", "hidden")

CHECKPOINT_FORMAT_VERSION = 1
