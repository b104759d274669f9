"""
Controller for the factorial experiment - design enumeration, execution
against the simulator, and end-to-end replication of the analysis tables
"""

import itertools
from concurrent.futures import ThreadPoolExecutor
from typing import Dict, List, Optional, Sequence

import numpy as np
from loguru import logger
from tenacity import Retrying, retry_if_exception_type, stop_after_attempt

from app.core.config import settings
from app.core.exceptions import CardBlockedError, LabError, SeparationDetected
from app.models.dataset import Dataset, Observation
from app.models.experiment import DesignSpec, ExecutionMode, ReplicationReport, ResponseSection, SelectedModel
from app.models.interception import RecordedFingerprint
from app.models.protocol import CardState, TransactionRequest
from app.models.reports import FitResult
from app.models.risk import PREDICTORS, RESPONSES, LogisticModel, PredictorVector, RiskModels
from app.services.fixtures import HOLDER_HEADERS, holder_profile, recorded_fingerprint
from app.services.interceptor import build_request, resolve_card
from app.services.protocol import run_transaction
from app.services.risk_engine import RiskEngine
from app.stats.diagnostics import diagnostics
from app.stats.goodness import goodness_of_fit, hosmer_lemeshow_c
from app.stats.inference import aicc, holm_adjust, odds_ratio_table, overall_model_test, wald_inference
from app.stats.irls import fit_design, fit_logistic
from app.stats.selection import subset_key, interaction_screen, select_model
from app.stats.validation import repeated_kfold_cv


class ExperimentController:
    """Controller for running and analysing the manipulation experiment"""

    @staticmethod
    def enumerate_design(spec: Optional[DesignSpec] = None) -> List[PredictorVector]:
        """Card-major crossing (card, website, region, value, machine_data), replicates adjacent"""
        spec = spec or DesignSpec()
        rows = []
        for card, website, region, value, machine_data in itertools.product(
            spec.card, spec.website, spec.region, spec.value, spec.machine_data
        ):
            cell = PredictorVector(
                machine_data=machine_data, value=value, region=region, website=website, card=card
            )
            rows.extend([cell] * spec.replicates)
        return rows

    @staticmethod
    def request_for(x: PredictorVector, replacement: RecordedFingerprint, card_state: CardState = CardState.ACTIVE) -> TransactionRequest:
        card = resolve_card(x.card)
        if card_state != card.state:
            card = card.model_copy(update={"state": card_state})
        return build_request(
            card=card,
            website=x.website,
            region_choice="foreign" if x.region else "home",
            value_choice="high" if x.value else "low",
            machine=holder_profile(),
            overwrite=replacement if x.machine_data else None,
            headers=HOLDER_HEADERS,
        )

    @staticmethod
    def _observation(x: PredictorVector, outcome) -> Observation:
        return Observation(x=x, challenged=outcome.challenged, declined=outcome.declined, blocked=outcome.blocked)

    @classmethod
    def execute(
        cls,
        design: Sequence[PredictorVector],
        models: RiskModels,
        seed: int,
        mode: ExecutionMode = ExecutionMode.STATELESS,
        replacement: Optional[RecordedFingerprint] = None,
        workers: Optional[int] = None,
    ) -> Dataset:
        """
        Run every design row through the interceptor and the protocol.

        Row i is seeded by SeedSequence([seed, i]); stateless rows may run
        concurrently and are merged in design order. In stateful mode a block
        is absorbing and later rows for that card are skipped.
        """
        engine = RiskEngine(models)
        replacement = replacement or recorded_fingerprint()
        workers = workers or settings.EXECUTION_WORKERS
        logger.info(f"🔍 Executing {len(design)} transactions ({mode.value}, preset={models.name}, seed={seed})")

        if mode == ExecutionMode.STATELESS:

            def run(index: int) -> Observation:
                x = design[index]
                outcome, _ = run_transaction(
                    cls.request_for(x, replacement), engine, np.random.SeedSequence([seed, index])
                )
                return cls._observation(x, outcome)

            if workers > 1:
                with ThreadPoolExecutor(max_workers=workers) as pool:
                    rows = list(pool.map(run, range(len(design))))
            else:
                rows = [run(index) for index in range(len(design))]
            data = Dataset(rows=rows)
        else:
            blocked_cards = set()
            rows = []
            skipped = 0
            for index, x in enumerate(design):
                state = CardState.BLOCKED if x.card in blocked_cards else CardState.ACTIVE
                try:
                    outcome, _ = run_transaction(
                        cls.request_for(x, replacement, state),
                        engine,
                        np.random.SeedSequence([seed, index]),
                        stateful=True,
                    )
                except CardBlockedError:
                    skipped += 1
                    continue
                if outcome.blocked:
                    blocked_cards.add(x.card)
                rows.append(cls._observation(x, outcome))
            if skipped:
                logger.warning(f"⚠️  Skipped {skipped} transactions on blocked cards {sorted(blocked_cards)}")
            data = Dataset(rows=rows, skipped=skipped)

        logger.info(f"✓ Executed {data.n} transactions, digest {data.digest()[:12]}")
        return data

    @staticmethod
    def selected_tables(fit: FitResult) -> SelectedModel:
        return SelectedModel(
            predictors=fit.predictors,
            coefficients=wald_inference(fit),
            overall=overall_model_test(fit),
            aicc=aicc(fit),
            gof=goodness_of_fit(fit),
            hosmer_lemeshow=hosmer_lemeshow_c(fit),
            odds_ratios=odds_ratio_table(fit),
        )

    @classmethod
    def analyze_response(
        cls,
        data: Dataset,
        response: str,
        predictors: Optional[Sequence[str]] = None,
        cv_seed: int = 0,
        k: Optional[int] = None,
        repeats: Optional[int] = None,
    ) -> ResponseSection:
        predictors = list(predictors or PREDICTORS)
        subset = data.for_response(response)
        fit = fit_logistic(subset, predictors)
        selection, fits = select_model(subset, predictors)
        selected_fit = fits[subset_key(selection.selected)]
        selected_model = None
        if selection.selected and subset_key(selection.selected) != subset_key(predictors):
            selected_model = cls.selected_tables(selected_fit)
        return ResponseSection(
            response=response,
            predictors=predictors,
            fit=fit,
            coefficients=wald_inference(fit),
            overall=overall_model_test(fit),
            aicc=aicc(fit),
            gof=goodness_of_fit(fit),
            hosmer_lemeshow=hosmer_lemeshow_c(fit),
            odds_ratios=odds_ratio_table(fit),
            cv=repeated_kfold_cv(subset, predictors, k=k, repeats=repeats, seed=cv_seed),
            diagnostics=diagnostics(fit),
            selection=selection,
            selected_fit=selected_fit,
            selected_model=selected_model,
            interactions=interaction_screen(subset, predictors),
        )

    @classmethod
    def replicate_analysis(
        cls,
        data: Dataset,
        predictors: Optional[Sequence[str]] = None,
        cv_seed: int = 0,
        k: Optional[int] = None,
        repeats: Optional[int] = None,
    ) -> ReplicationReport:
        """Full pipeline per DV; a failing DV is reported in its section without stopping the others"""
        sections: Dict[str, ResponseSection] = {}
        for response in RESPONSES:
            try:
                sections[response] = cls.analyze_response(data, response, predictors, cv_seed, k, repeats)
            except LabError as e:
                logger.warning(f"⚠️  {response}: {e.message}")
                sections[response] = ResponseSection(response=response, error=e.message)

        analysed = [r for r in RESPONSES if sections[r].overall is not None]
        adjusted = holm_adjust([sections[r].overall.lr.p for r in analysed])
        return ReplicationReport(
            n=data.n,
            digest=data.digest(),
            sections=sections,
            holm_adjusted=dict(zip(analysed, adjusted)),
            seed=cv_seed,
        )

    @staticmethod
    def simulate_cells(model: LogisticModel, n: int, rng: np.random.Generator):
        """Uniform random design cells (card uniform on 1..4) with responses drawn from `model`"""
        columns = {name: rng.integers(0, 2, size=n).astype(float) for name in PREDICTORS if name != "card"}
        columns["card"] = rng.integers(1, 5, size=n).astype(float)
        eta = model.intercept + sum(beta * columns[name] for name, beta in model.coefficients.items())
        y = (rng.random(n) < 1.0 / (1.0 + np.exp(-eta))).astype(float)
        return columns, y

    @classmethod
    def calibration_roundtrip(cls, model: LogisticModel, n: int, seed: int) -> float:
        """Simulate n rows from `model`, refit, return the max absolute coefficient error"""
        terms = [name for name in PREDICTORS if name in model.coefficients]
        truth = np.array([model.intercept] + [model.coefficients[name] for name in terms])

        def attempt(number: int) -> float:
            rng = np.random.default_rng(np.random.SeedSequence([seed, number]))
            columns, y = cls.simulate_cells(model, n, rng)
            X = np.column_stack([np.ones(n)] + [columns[name] for name in terms])
            fit = fit_design(X, y, ["(Intercept)"] + terms, response_name=model.name)
            if fit.separation_warning:
                raise SeparationDetected(f"separated sample for {model.name}", attempt=number)
            return float(np.max(np.abs(fit.beta - truth)))

        for retry in Retrying(
            stop=stop_after_attempt(settings.CALIBRATION_MAX_RETRIES),
            retry=retry_if_exception_type(SeparationDetected),
            before_sleep=lambda state: logger.warning(
                f"⚠️  Calibration sample {state.attempt_number} separated, regenerating"
            ),
            reraise=True,
        ):
            with retry:
                error = attempt(retry.retry_state.attempt_number)
        logger.info(f"✓ Calibration round-trip for {model.name} (n={n}): max error {error:.4f}")
        return error
