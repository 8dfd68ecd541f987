import logging

from ..exceptions import ValueError
from ..scene_graph.notifications import BindingNotification, NodeMoved

__all__ = ["StabilityTracker"]

logger = logging.getLogger(__name__)

# displacements within this of the threshold count as equal to it
DISPLACEMENT_TOLERANCE = 1e-9


class StabilityTracker:
    """Gates binding until the navigational layer has been quiet for a while.

    Additions, removals and moves farther than ``significance_threshold``
    count as significant pose updates. A move of exactly the threshold, up to
    rounding of the displacement, does not.

    :param window: quiet time in seconds required before binding
    :param significance_threshold: smallest node displacement in meters that counts
    :param last_significant_update: time of the latest significant update
    :raises: :exc:`ValueError <flowdyn.exceptions.ValueError>`: if ``window`` is not positive or the threshold is negative.
    """

    def __init__(
        self,
        window: float = 10.0,
        significance_threshold: float = 0.05,
        last_significant_update: float = 0.0,
    ) -> None:
        if not window > 0:
            raise ValueError("window must be > 0, got {}.".format(window))
        if not significance_threshold >= 0:
            raise ValueError(
                "significance_threshold must be >= 0, got {}.".format(
                    significance_threshold
                )
            )
        self.window: float = float(window)
        self.significance_threshold: float = float(significance_threshold)
        self.last_significant_update: float = float(last_significant_update)

    def is_significant(self, notification: BindingNotification) -> bool:
        if isinstance(notification, NodeMoved):
            return notification.displacement - self.significance_threshold > DISPLACEMENT_TOLERANCE
        return True

    def notify(self, notification: BindingNotification, now: float) -> bool:
        """Record a graph change.

        :return: whether it restarted the quiet window
        """
        if not self.is_significant(notification):
            return False
        self.last_significant_update = max(self.last_significant_update, now)
        logger.debug("Significant pose update at t=%.3f: %s", now, notification)
        return True

    def is_stable(self, now: float) -> bool:
        return now - self.last_significant_update >= self.window

    def __str__(self):
        return "<StabilityTracker [window={window}, significance_threshold={threshold}, last_significant_update={last}]>".format(
            window=self.window,
            threshold=self.significance_threshold,
            last=self.last_significant_update,
        )
