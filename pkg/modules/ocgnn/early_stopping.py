"""Patience-based early stopping on validation AUC, loss as tie-break."""

from __future__ import annotations

import logging
import math


logger = logging.getLogger(__name__)


class EarlyStopping:
    """Track the best validation AUC and count epochs without improvement.

    An epoch improves when its AUC is higher than the best so far, or equal
    with a lower validation loss. Training stops once ``patience``
    consecutive epochs fail to improve (``patience=0`` stops at the first).
    """

    def __init__(self, patience: int) -> None:
        self.patience = patience
        self.counter = 0
        self.best_auc = -math.inf
        self.best_loss = math.inf
        self.best_epoch = 0
        self.should_stop = False
        self.improved = False

    def update(self, epoch: int, val_auc: float, val_loss: float) -> bool:
        """Record one epoch; return ``True`` when it is the new best."""

        loss = val_loss if math.isfinite(val_loss) else math.inf
        self.improved = val_auc > self.best_auc or (
            val_auc == self.best_auc and loss < self.best_loss
        )
        if self.improved:
            self.best_auc = val_auc
            self.best_loss = loss
            self.best_epoch = epoch
            self.counter = 0
            return True

        self.counter += 1
        if self.counter >= self.patience:
            self.should_stop = True
            logger.info(
                "Early stopping at epoch %s (best epoch %s, val AUC %.4f)",
                epoch,
                self.best_epoch,
                self.best_auc,
                extra={"epoch": epoch},
            )
        else:
            logger.debug("Early stop counter %s/%s", self.counter, self.patience)
        return False
