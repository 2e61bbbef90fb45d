from lib.scheduling.methods.schedulers import Schedulers
from lib.scheduling.model.scheduler import Scheduler


def get_scheduler(scheduler_type: Schedulers, **kwargs) -> Scheduler:
    match scheduler_type:
        case Schedulers.MET:
            from lib.scheduling.methods.implementations.met import MetScheduler

            return MetScheduler()

        case Schedulers.EFT:
            from lib.scheduling.methods.implementations.eft import EftScheduler

            return EftScheduler()

        case Schedulers.ETF:
            from lib.scheduling.methods.implementations.etf import EtfScheduler

            return EtfScheduler()

        case Schedulers.DRM:
            from lib.drm.agent import DrmAgent
            from lib.drm.encoding import EncodingLayout
            from lib.scheduling.methods.implementations.drm import DrmScheduler

            agent = kwargs.get("agent", None)
            if agent is None:
                job = kwargs.get("job", None)
                rm = kwargs.get("rm", None)
                if job is None or rm is None:
                    raise ValueError("Error: A new DRM scheduler needs the job and resource matrix it is sized for")
                agent = DrmAgent(EncodingLayout(job.task_count, rm.pe_count), kwargs.get("drm_config", None))

            return DrmScheduler(
                agent,
                training=kwargs.get("training", True),
                greedy=kwargs.get("greedy", False),
            )

        case _:
            raise ValueError(f'No Scheduler specified for type "{scheduler_type}"')
