from sqlalchemy import DateTime, Float, ForeignKey, Integer, String, Text, func
from sqlalchemy.orm import DeclarativeBase, Mapped, mapped_column, relationship


class Based(DeclarativeBase):
    created: Mapped[DateTime] = mapped_column(DateTime, default=func.now())
    updated: Mapped[DateTime] = mapped_column(DateTime, default=func.now(), onupdate=func.now())


class Run(Based):
    __tablename__ = 'run'

    id: Mapped[int] = mapped_column(primary_key=True, autoincrement=True)
    command: Mapped[str] = mapped_column(String(25), nullable=False)
    config: Mapped[str] = mapped_column(Text, nullable=False)
    version: Mapped[str] = mapped_column(String(50), nullable=False)
    out_dir: Mapped[str] = mapped_column(String(500), nullable=True)
    thresholds_hash: Mapped[str] = mapped_column(String(64), nullable=True)
    started: Mapped[str] = mapped_column(String(40), nullable=False)
    finished: Mapped[str] = mapped_column(String(40), nullable=True)


class Estimate(Based):
    __tablename__ = 'estimate'

    id: Mapped[int] = mapped_column(primary_key=True, autoincrement=True)
    run_id: Mapped[int] = mapped_column(ForeignKey('run.id', ondelete='CASCADE'), nullable=False)
    experiment: Mapped[str] = mapped_column(String(25), nullable=False)
    dist: Mapped[str] = mapped_column(String(50), nullable=False)
    phi: Mapped[str] = mapped_column(String(50), nullable=False)
    n: Mapped[int] = mapped_column(Integer, nullable=False)
    param: Mapped[float] = mapped_column(Float, nullable=False)
    trials: Mapped[int] = mapped_column(Integer, nullable=False)
    hits: Mapped[int] = mapped_column(Integer, nullable=False)
    p_hat: Mapped[float] = mapped_column(Float, nullable=False)
    ci_lo: Mapped[float] = mapped_column(Float, nullable=False)
    ci_hi: Mapped[float] = mapped_column(Float, nullable=False)
    # зерно беззнаковое 64-битное, храним строкой
    base_seed: Mapped[str] = mapped_column(String(20), nullable=False)
    prime_n: Mapped[int] = mapped_column(Integer, nullable=False)

    run: Mapped['Run'] = relationship(backref='estimate')
