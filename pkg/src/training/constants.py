# Weight of the sentence-label loss in L = L_MLE + lambda * L_BCE
LAMBDA_BCE = 0.08

LEARNING_RATE = 1e-3
CLIP_NORM = 5.0
INIT_RANGE = 0.1

BATCH_SIZE = 16
MAX_EPOCHS = 30
SEED = 1

# Validation runs every VALIDATION_INTERVAL epochs, training stops after PATIENCE validations without improvement
VALIDATION_INTERVAL = 1
PATIENCE = 5

# Sentence probabilities are clamped to [BCE_EPSILON, 1 - BCE_EPSILON] in L_BCE
BCE_EPSILON = 1e-7

# Recorded in the training log header
BCE_REDUCTION = "sum over sentences, mean over batch"

TRAIN_LOG_NAME = "train_log.jsonl"
BEST_CHECKPOINT_NAME = "best.ckpt"
LAST_CHECKPOINT_NAME = "last.ckpt"
DIVERGENCE_DUMP_NAME = "divergence_dump.json"
