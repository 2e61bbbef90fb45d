from lib.scheduling.methods.schedulers import Schedulers

_scheduler_display_mapping = {
    Schedulers.MET: "MET",
    Schedulers.EFT: "EFT",
    Schedulers.ETF: "ETF",
    Schedulers.DRM: "DRM",
}


def get_scheduler_display_name(scheduler: Schedulers | str) -> str:
    """Returns the name of a scheduler as shown in chart legends and tables."""
    if isinstance(scheduler, str):
        try:
            scheduler = Schedulers.get_scheduler_type(scheduler)
        except ValueError:
            return scheduler

    return _scheduler_display_mapping.get(scheduler, scheduler.value)
