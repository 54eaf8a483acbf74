"""Pydantic request/response models for the JSON API.

Response models mirror the wire representations in ``facmon.wire`` exactly;
dates travel as ISO-8601 strings, absent optionals as null.
"""

from __future__ import annotations

from datetime import date
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field

from ..domain import Condition, FindingStatus, LifecycleEvent, PhotoView, Role

# -- requests -----------------------------------------------------------------


class LoginRequest(BaseModel):
    username: str
    password: str


class ReferencePayload(BaseModel):
    """Payload for any reference kind; kind-specific fields are optional here
    and validated by the registry."""

    code: str
    name: str = ""
    address: Optional[str] = None
    floor: Optional[int] = None
    campus_code: Optional[str] = None
    active: Optional[bool] = None

    def fields_for_registry(self) -> dict:
        return {k: v for k, v in self.model_dump().items() if v is not None}


class ItemRegisterRequest(BaseModel):
    barcode: str
    name: str
    specification: str = ""
    category_code: str
    type_code: str
    brand_code: str
    source_code: str
    purchase_date: date
    warranty_end_date: Optional[date] = None
    maintenance_interval_days: Optional[int] = None
    campus_code: str
    location_code: str
    custodian: str


class TransferRequest(BaseModel):
    to_campus_code: str
    to_location_code: str
    date: date
    note: Optional[str] = None


class StatusChangeRequest(BaseModel):
    event: LifecycleEvent
    date: date
    note: Optional[str] = None


class RepairOpenRequest(BaseModel):
    date: date
    description: str


class RepairCompleteRequest(BaseModel):
    completed_date: date
    cost: Optional[str] = None


class FindingSubmitRequest(BaseModel):
    barcode: Optional[str] = None
    object_name: Optional[str] = None
    object_description: Optional[str] = None
    date: date
    campus_code: str
    location_code: str
    finding: str
    recommendation: str = ""


class FollowUpRequest(BaseModel):
    note: str


class ResolveRequest(BaseModel):
    resolution_date: date


class LocationAddress(BaseModel):
    campus_code: str
    location_code: str


class UserCreateRequest(BaseModel):
    username: str
    password: str
    role: Role
    work_unit_name: Optional[str] = None
    assigned_locations: list[LocationAddress] = Field(default_factory=list)


# -- responses -----------------------------------------------------------------


class SessionResponse(BaseModel):
    token: str
    role: Role
    username: str
    expires_at: str


class PhotoOut(BaseModel):
    id: str
    view: PhotoView
    media_type: str
    byte_length: int


class ItemOut(BaseModel):
    barcode: str
    name: str
    specification: str
    category_code: Optional[str]
    type_code: Optional[str]
    brand_code: Optional[str]
    source_code: Optional[str]
    purchase_date: str
    warranty_end_date: Optional[str]
    maintenance_interval_days: Optional[int]
    condition: Condition
    campus_code: Optional[str]
    location_code: Optional[str]
    custodian: str
    registered_date: str
    photos: list[PhotoOut]


class TransferOut(BaseModel):
    id: str
    barcode: str
    from_campus_code: Optional[str]
    from_location_code: Optional[str]
    to_campus_code: Optional[str]
    to_location_code: Optional[str]
    date: str
    actor: str
    note: Optional[str]


class StatusChangeOut(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    id: str
    barcode: str
    event: LifecycleEvent
    from_condition: Condition = Field(validation_alias="from", serialization_alias="from")
    to_condition: Condition = Field(validation_alias="to", serialization_alias="to")
    date: str
    actor: str
    note: Optional[str]


class RepairOut(BaseModel):
    id: str
    barcode: str
    opened_date: str
    completed_date: Optional[str]
    description: str
    cost: Optional[str]
    actor: str


class ItemDetailOut(ItemOut):
    transfers: list[TransferOut]
    status_changes: list[StatusChangeOut]
    repairs: list[RepairOut]


class FindingOut(BaseModel):
    id: str
    barcode: Optional[str]
    object_name: str
    object_description: Optional[str]
    date: str
    campus_code: Optional[str]
    location_code: Optional[str]
    finding: str
    recommendation: str
    reporter: str
    status: FindingStatus
    follow_up_note: Optional[str]
    resolution_date: Optional[str]
    photos: list[PhotoOut]


class UserOut(BaseModel):
    username: str
    role: Role
    work_unit_name: Optional[str]
    assigned_locations: list[dict]
    active: bool


class PeriodOut(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    from_date: str = Field(validation_alias="from", serialization_alias="from")
    to_date: str = Field(validation_alias="to", serialization_alias="to")


class SummaryOut(BaseModel):
    period: PeriodOut
    as_of: str
    items_total: int
    items_by_condition: dict[str, int]
    items_by_campus: dict[str, int]
    items_by_category: dict[str, int]
    findings_opened: int
    findings_resolved: int
    findings_open_at_end: int
    mean_resolution_days: Optional[float]
    warranty_expiring_within_30_days: int


class WarrantyInWarrantyOut(BaseModel):
    item: ItemOut
    days_remaining: int


class WarrantyExpiredOut(BaseModel):
    item: ItemOut
    days_since: int


class WarrantyReportOut(BaseModel):
    in_warranty: list[WarrantyInWarrantyOut]
    expired: list[WarrantyExpiredOut]
    none: list[ItemOut]


class MaintenanceDueOut(BaseModel):
    item: ItemOut
    days_overdue: int


class LocationViewOut(BaseModel):
    location: dict
    items: list[ItemOut]
    open_findings: list[FindingOut]


class ErrorResponse(BaseModel):
    code: str
    message: str
    details: dict = Field(default_factory=dict)
